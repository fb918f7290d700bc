//! Riesz `s`-energies `I_s(μ) = ∬ |x - y|^{-s} dμ(x) dμ(y)`.

use crate::error::{Error, Result};
use crate::fourier::{ft, quadrature::cell_masses};
use crate::measure::Measure;
use crate::numeric::{gl8, GaussLegendre};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use std::f64::consts::PI;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyMethod {
    Spatial,
    Fourier,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult {
    pub s: f64,
    /// `+inf` when `infinite` is set.
    pub value: f64,
    pub infinite: bool,
    pub method: EnergyMethod,
    /// Fourier-side constant `c(d, s)`; 1 for spatial results.
    pub constant: f64,
    pub err_estimate: f64,
}

impl EnergyResult {
    fn infinite(s: f64, method: EnergyMethod, constant: f64) -> Self {
        Self { s, value: f64::INFINITY, infinite: true, method, constant, err_estimate: 0.0 }
    }
}

/// `c(d, s) = pi^{s - d/2} Γ((d - s)/2) / Γ(s/2)`, so that
/// `I_s(μ) = c(d, s) ∫ |μ̂(ξ)|^2 |ξ|^{s-d} dξ`.
pub fn fourier_energy_constant(d: usize, s: f64) -> f64 {
    let d = d as f64;
    PI.powf(s - 0.5 * d) * gamma(0.5 * (d - s)) / gamma(0.5 * s)
}

/// Closed form `I_s` of Lebesgue measure on an interval of length `len`,
/// normalized to unit mass.
pub fn uniform_interval_energy(s: f64, len: f64) -> f64 {
    2.0 / ((1.0 - s) * (2.0 - s)) * len.powf(-s)
}

fn check_s(m: &Measure, s: f64) -> Result<()> {
    if m.ambient_dim() != 1 {
        return Err(Error::Unsupported("energies are implemented for d = 1".into()));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidArgument(format!("s must lie in (0, d) = (0, 1), got {s}")));
    }
    Ok(())
}

/// `∫∫` of `|x - y|^{-s}` over two unit cells `k` apart.
fn cell_kernel(s: f64, k: usize) -> f64 {
    let q = (1.0 - s) * (2.0 - s);
    let p = 2.0 - s;
    if k == 0 {
        2.0 / q
    } else {
        let k = k as f64;
        ((k + 1.0).powf(p) - 2.0 * k.powf(p) + (k - 1.0).powf(p)) / q
    }
}

/// `h^{-s} Σ_{i,j} m_i m_j K(|i - j|)`: exact when the density is constant on
/// every cell, including the singular diagonal cells.
fn grid_energy(masses: &[f64], h: f64, s: f64) -> f64 {
    let n = masses.len();
    let total: f64 = (0..n)
        .into_par_iter()
        .map(|k| {
            let corr: f64 = (0..n - k).map(|i| masses[i] * masses[i + k]).sum();
            let mult = if k == 0 { 1.0 } else { 2.0 };
            mult * corr * cell_kernel(s, k)
        })
        .sum();
    total * h.powf(-s)
}

fn coarsen(masses: &[f64]) -> Vec<f64> {
    masses.chunks(2).map(|c| c.iter().sum()).collect()
}

/// Richardson correction to the finest of three grid values, using the
/// observed order `p = log2(|mid - coarse| / |fine - mid|)`:
/// `(fine - mid) / (2^p - 1)`. Orders below 1/2 are treated as 1/2.
fn richardson_correction(fine: f64, mid: f64, coarse: f64) -> f64 {
    let d1 = fine - mid;
    if d1 == 0.0 {
        return 0.0;
    }
    let d2 = (mid - coarse).abs();
    let ratio = (d2 / d1.abs()).max(2f64.sqrt());
    d1 / (ratio - 1.0)
}

/// Spatial-side energy on a grid of `resolution` cells over the support.
///
/// Cell masses come from the quadrature oracle's density form; the
/// kernel is integrated exactly over every pair of cells under a
/// piecewise-constant density. The grid values at full, half and quarter
/// resolution are Richardson-extrapolated; the size of the correction is the
/// error estimate. Measures with atoms report `infinite`.
pub fn energy_spatial(m: &Measure, s: f64, resolution: usize) -> Result<EnergyResult> {
    check_s(m, s)?;
    if resolution < 8 || !resolution.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("resolution must be a power of two, at least 8, got {resolution}")));
    }
    if m.has_atoms() {
        return Ok(EnergyResult::infinite(s, EnergyMethod::Spatial, 1.0));
    }
    let (lo, hi) = m.support_bounds();
    let h = (hi - lo) / resolution as f64;
    let masses = match cell_masses(m, lo, hi, resolution, 1e-12)? {
        Some(v) => v,
        None => return Ok(EnergyResult::infinite(s, EnergyMethod::Spatial, 1.0)),
    };
    let fine = grid_energy(&masses, h, s);
    let half = coarsen(&masses);
    let mid = grid_energy(&half, 2.0 * h, s);
    let coarse = grid_energy(&coarsen(&half), 4.0 * h, s);
    let correction = richardson_correction(fine, mid, coarse);
    let value = fine + correction;
    let err_estimate = correction.abs();
    Ok(EnergyResult {
        s,
        value,
        infinite: false,
        method: EnergyMethod::Spatial,
        constant: 1.0,
        err_estimate,
    })
}

/// Fourier-side energy `2 c(1, s) ∫_0^cutoff |μ̂(ξ)|^2 ξ^{s-1} dξ` plus a
/// tail correction.
///
/// On `[0, 1]` the substitution `t = ξ^s` removes the singularity; on
/// `[1, cutoff]` unit panels resolve the oscillation of `|μ̂|^2`, whose
/// frequencies are bounded by the support diameter. The tail is modelled as
/// `A ξ^{-2}` with `A` the mean of `|μ̂|^2 ξ^2` over the last octave; the
/// error estimate is the size of that tail plus the gap between 8- and
/// 6-point rules on the panels. Fails if the tail is not small
/// compared to the value.
pub fn energy_fourier(m: &Measure, s: f64, cutoff: f64) -> Result<EnergyResult> {
    check_s(m, s)?;
    let c = fourier_energy_constant(1, s);
    if m.has_atoms() {
        return Ok(EnergyResult::infinite(s, EnergyMethod::Fourier, c));
    }
    if !(cutoff > 2.0) || !cutoff.is_finite() {
        return Err(Error::CutoffTooSmall(format!("cutoff {cutoff} must exceed 2")));
    }
    let (lo, hi) = m.support_bounds();
    let diameter = (hi - lo).max(1e-300);
    // panels of width at most one oscillation period
    let width = (1.0 / diameter).min(1.0);
    let sq = |xi: f64| ft(m, xi).map(|z| z.norm_sqr());
    let rule = gl8();

    let head_rule = GaussLegendre::new(32);
    let head_panels = 16;
    let mut head = 0.0;
    for p in 0..head_panels {
        let a = p as f64 / head_panels as f64;
        let b = (p + 1) as f64 / head_panels as f64;
        let mut err = None;
        head += head_rule.integrate(a, b, |t: f64| match sq(t.powf(1.0 / s)) {
            Ok(v) => v / s,
            Err(e) => {
                err = Some(e);
                0.0
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }

    // Each panel with an 8-point and a 6-point rule; their difference
    // estimates the quadrature error.
    let coarse_rule = gl6();
    let n = ((cutoff - 1.0) / width).ceil() as usize;
    let h = (cutoff - 1.0) / n as f64;
    let (body, body_coarse) = (0..n)
        .into_par_iter()
        .map(|k| {
            let a = 1.0 + k as f64 * h;
            let half = 0.5 * h;
            let mut fine = 0.0;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let xi = a + half * (1.0 + x);
                fine += sq(xi)? * xi.powf(s - 1.0) * w * half;
            }
            let mut coarse = 0.0;
            for (x, w) in coarse_rule.nodes.iter().zip(&coarse_rule.weights) {
                let xi = a + half * (1.0 + x);
                coarse += sq(xi)? * xi.powf(s - 1.0) * w * half;
            }
            Ok((fine, coarse))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?
        .into_iter()
        .fold((0.0, 0.0), |acc, v| (acc.0 + v.0, acc.1 + v.1));

    // Mean of |μ̂|^2 ξ^2 over the last octave.
    // Log-spaced with an irrational phase, so samples avoid integers.
    let samples = 4096;
    let mut tail_coef = 0.0;
    for k in 0..samples {
        let xi = 0.5 * cutoff * 2f64.powf((k as f64 + 0.618_033_988_749_895) / samples as f64);
        tail_coef += sq(xi)? * xi * xi;
    }
    tail_coef /= samples as f64;
    let tail = tail_coef * cutoff.powf(s - 2.0) / (2.0 - s);

    let integral = head + body + tail;
    let value = 2.0 * c * integral;
    let err_estimate = 2.0 * c * (tail + (body - body_coarse).abs());
    if err_estimate >= 0.5 * value {
        return Err(Error::CutoffTooSmall(format!(
            "tail estimate {err_estimate:e} is not small against value {value:e} at cutoff {cutoff}"
        )));
    }
    Ok(EnergyResult { s, value, infinite: false, method: EnergyMethod::Fourier, constant: c, err_estimate })
}

fn gl6() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(6))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_at_half_is_one() {
        assert!((fourier_energy_constant(1, 0.5) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kernel_sums_to_unit_square_integral() {
        // Σ over an n x n grid of unit cells equals n^{2-s} I_s(uniform).
        let s = 0.3;
        let n = 7;
        let masses = vec![1.0 / n as f64; n];
        let v = grid_energy(&masses, 1.0 / n as f64, s);
        assert!((v - uniform_interval_energy(s, 1.0)).abs() < 1e-12);
    }

    #[test]
    fn lebesgue_spatial_is_exact() {
        let r = energy_spatial(&Measure::lebesgue(), 0.5, 1 << 10).unwrap();
        assert!((r.value - 8.0 / 3.0).abs() < 1e-10);
        assert_eq!(r.method, EnergyMethod::Spatial);
    }

    #[test]
    fn atoms_flag_infinity() {
        let r = energy_spatial(&Measure::dirac(0.5).unwrap(), 0.3, 64).unwrap();
        assert!(r.infinite && r.value.is_infinite());
        let two = Measure::atomic_1d(&[(0.0, 0.5), (1.0, 0.5)]).unwrap();
        assert!(energy_fourier(&two, 0.5, 1e3).unwrap().infinite);
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(energy_spatial(&Measure::lebesgue(), 1.0, 64).is_err());
        assert!(energy_fourier(&Measure::lebesgue(), 0.0, 1e3).is_err());
        assert!(matches!(energy_fourier(&Measure::lebesgue(), 0.5, 1.0), Err(Error::CutoffTooSmall(_))));
    }
}
