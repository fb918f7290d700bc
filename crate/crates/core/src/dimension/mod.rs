//! Estimators and experiments built on the transforms.

pub mod decay;
pub mod energy;

pub use decay::{decay_exponent, decay_exponent_with, DecayReport, DecayWindow, ProxyRule};
pub use energy::{energy_fourier, energy_spatial, fourier_energy_constant, EnergyMethod, EnergyResult};

use crate::error::{Error, Result};
use crate::fourier::ft;
use crate::measure::{determinant, Measure, Scale, Window};
use crate::numeric::sin_cos_pi;
use crate::schedule::FrequencySchedule;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Smallest window order for which restriction preserves transform decay.
pub fn min_window_order(d: usize) -> u32 {
    (3 * d as u32).div_ceil(2)
}

/// Restricts `m` by the polynomial bump of `window` (no renormalization).
pub fn smooth_cut(m: &Measure, window: Window) -> Result<Measure> {
    let need = min_window_order(m.ambient_dim());
    if window.order < need {
        return Err(Error::InvalidArgument(format!(
            "window order {} is below the required {need}",
            window.order
        )));
    }
    m.windowed(window)
}

/// The threshold `pi eps / (8 + 2 pi eps)` that some `|μ̂(j)|` must reach for
/// every probability measure on `[eps, 1]`.
pub fn lower_bound_threshold(eps: f64) -> f64 {
    std::f64::consts::PI * eps / (8.0 + 2.0 * std::f64::consts::PI * eps)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundWitness {
    /// Smallest `j` with `|μ̂(j)| >= bound`, if one exists up to `j_max`.
    pub j: Option<u64>,
    /// `|μ̂(j)|` at the witness (0 if none).
    pub value: f64,
    pub bound: f64,
}

impl LowerBoundWitness {
    pub fn found(&self) -> bool {
        self.j.is_some()
    }
}

const SUPPORT_SLACK: f64 = 1e-12;

/// Searches `j = 1 ..= j_max` for the first integer with `|μ̂(j)| >= bound`.
pub fn lower_bound_search(m: &Measure, eps: f64, j_max: u64) -> Result<LowerBoundWitness> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1], got {eps}")));
    }
    if m.ambient_dim() != 1 {
        return Err(Error::Unsupported("lower-bound search is one-dimensional".into()));
    }
    let (lo, hi) = m.support_bounds();
    if lo < eps - SUPPORT_SLACK || hi > 1.0 + SUPPORT_SLACK {
        return Err(Error::SupportViolation(format!("support [{lo}, {hi}] is not inside [{eps}, 1]")));
    }
    if (m.mass() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("expected a probability measure, mass is {}", m.mass())));
    }
    let bound = lower_bound_threshold(eps);
    let hit = (1..=j_max)
        .into_par_iter()
        .map(|j| ft(m, j as f64).map(|z| (j, z.norm())))
        .find_first(|r| r.as_ref().map_or(true, |(_, v)| *v >= bound));
    match hit {
        Some(Ok((j, value))) => Ok(LowerBoundWitness { j: Some(j), value, bound }),
        Some(Err(e)) => Err(e),
        None => Ok(LowerBoundWitness { j: None, value: 0.0, bound }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationPair {
    /// `|(μ + μ_t)^(ξ)|` evaluated from the sum measure.
    pub value: f64,
    /// `2 |cos(pi t ξ)| |μ̂(ξ)|`.
    pub identity: f64,
}

/// `|(μ + μ_t)^(ξ)|`, checked against `2 |cos(pi t ξ)| |μ̂(ξ)|`.
///
/// Errors if the two disagree by more than `1e-12` times the mass.
pub fn translation_pair_transform(m: &Measure, t: f64, xi: f64) -> Result<TranslationPair> {
    let pair = Measure::mixture(&[m.clone(), m.translate(t)?], &[1.0, 1.0])?;
    let value = ft(&pair, xi)?.norm();
    let identity = 2.0 * sin_cos_pi(t * xi).1.abs() * ft(m, xi)?.norm();
    let tol = 1e-12 * m.mass().max(1.0);
    if (value - identity).abs() > tol {
        return Err(Error::NotConverged(format!(
            "translation identity off by {:e} at t = {t}, xi = {xi}",
            (value - identity).abs()
        )));
    }
    Ok(TranslationPair { value, identity })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub first: DecayReport,
    pub second: DecayReport,
    pub sum: DecayReport,
}

impl StabilityReport {
    /// `capped_dim(sum) - min(capped_dim(first), capped_dim(second))`.
    pub fn margin(&self) -> f64 {
        self.sum.capped_dim - self.first.capped_dim.min(self.second.capped_dim)
    }
}

/// Decay reports for `μ`, `ν` and `μ + ν`.
pub fn stability_experiment(m1: &Measure, m2: &Measure, sched: &FrequencySchedule) -> Result<StabilityReport> {
    let sum = Measure::mixture(&[m1.clone(), m2.clone()], &[1.0, 1.0])?;
    Ok(StabilityReport {
        first: decay_exponent(m1, sched)?,
        second: decay_exponent(m2, sched)?,
        sum: decay_exponent(&sum, sched)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixImageReport {
    pub original: DecayReport,
    pub with_image: DecayReport,
}

/// Moduli of the eigenvalues of a 1x1 or 2x2 scale.
fn eigenvalue_moduli(a: &Scale) -> Result<Vec<f64>> {
    match a {
        Scale::Scalar(v) => Ok(vec![v.abs()]),
        Scale::Matrix(m) if m.len() == 1 => Ok(vec![m[0][0].abs()]),
        Scale::Matrix(m) if m.len() == 2 => {
            let tr = m[0][0] + m[1][1];
            let det = determinant(m);
            let disc = tr * tr - 4.0 * det;
            if disc >= 0.0 {
                let r = disc.sqrt();
                Ok(vec![(0.5 * (tr + r)).abs(), (0.5 * (tr - r)).abs()])
            } else {
                // complex pair, both of modulus sqrt(det)
                Ok(vec![det.sqrt(); 2])
            }
        }
        Scale::Matrix(m) => Err(Error::Unsupported(format!("eigenvalues of a {}x{} matrix", m.len(), m.len()))),
    }
}

/// Decay reports for `μ` and `μ + A_* μ`.
pub fn matrix_image_experiment(m: &Measure, a: &Scale, sched: &FrequencySchedule) -> Result<MatrixImageReport> {
    let moduli = eigenvalue_moduli(a)?;
    if moduli.iter().any(|r| (r - 1.0).abs() < 1e-12) {
        return Err(Error::InvalidArgument("the linear map has an eigenvalue of modulus one".into()));
    }
    let image = m.affine_image(a.clone(), vec![0.0; m.ambient_dim()], false)?;
    let sum = Measure::mixture(&[m.clone(), image], &[1.0, 1.0])?;
    Ok(MatrixImageReport { original: decay_exponent(m, sched)?, with_image: decay_exponent(&sum, sched)? })
}
