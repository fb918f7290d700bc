//! Fourier transforms `μ̂(ξ) = ∫ exp(-2 pi i ξ·x) dμ(x)`.
//!
//! [`ft`] evaluates every measure variant in closed form (or as a factorized
//! product); [`ft_quadrature`] is an independent Filon-type oracle working
//! from densities only.

pub mod oscillatory;
pub mod quadrature;
pub mod wiener;
pub(crate) mod window;

pub use oscillatory::{oscillatory_bound, oscillatory_integral};
pub use quadrature::ft_quadrature;
pub use wiener::wiener_average;

use crate::error::{Error, Result};
use crate::measure::{DigitProduct, Measure, Variant};
use crate::numeric::{cis_turns, unit_interval_exp};
use crate::schedule::FrequencySchedule;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Knobs for the closed-form evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FtOptions {
    /// Self-similar products stop once `|ξ| / base^n` drops below this.
    pub self_similar_tol: f64,
    pub max_product_factors: usize,
}

impl Default for FtOptions {
    fn default() -> Self {
        Self { self_similar_tol: 1e-8, max_product_factors: 4096 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Factorized,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformSample {
    pub xi: f64,
    pub value: Complex64,
    pub method: Method,
}

/// `μ̂(ξ)` for a one-dimensional measure.
pub fn ft(m: &Measure, xi: f64) -> Result<Complex64> {
    ft_with(m, &[xi], &FtOptions::default())
}

/// `μ̂(ξ)` for a measure on `R^d`.
pub fn ft_vec(m: &Measure, xi: &[f64]) -> Result<Complex64> {
    ft_with(m, xi, &FtOptions::default())
}

pub fn ft_with(m: &Measure, xi: &[f64], opts: &FtOptions) -> Result<Complex64> {
    if xi.len() != m.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: m.ambient_dim(), found: xi.len() });
    }
    if xi.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(format!("frequency {xi:?} is not finite")));
    }
    transform(m, xi, opts)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn transform(m: &Measure, xi: &[f64], opts: &FtOptions) -> Result<Complex64> {
    match m.variant() {
        Variant::Atomic { atoms } => {
            Ok(atoms.iter().map(|a| cis_turns(-dot(xi, &a.position)) * a.weight).sum())
        }
        Variant::UniformOnIntervals { intervals } => {
            let x = xi[0];
            let total: f64 = intervals.iter().map(|iv| iv.len()).sum();
            let sum: Complex64 = intervals
                .iter()
                .map(|iv| cis_turns(-x * iv.a) * unit_interval_exp(-x * iv.len()) * iv.len())
                .sum();
            Ok(sum / total)
        }
        Variant::TrigDensity { terms } => {
            let x = xi[0];
            let mut acc = unit_interval_exp(-x);
            for t in terms {
                acc += oscillatory_integral(-x, t.frequency as f64) * t.amplitude;
            }
            Ok(acc)
        }
        Variant::SelfSimilarDigit { base, allowed_digits } => {
            self_similar_transform(*base, allowed_digits, xi[0], opts)
        }
        Variant::DigitProduct(dp) => Ok(digit_product_transform(dp, xi[0])),
        Variant::Mixture { components, weights } => {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, w) in components.iter().zip(weights) {
                acc += transform(c, xi, opts)? * *w;
            }
            Ok(acc)
        }
        Variant::AffineImage { inner, scale, offset, mod1 } => {
            if *mod1 && xi[0].fract() != 0.0 {
                return Err(Error::NonIntegerFrequency(xi[0]));
            }
            let pulled = scale.transpose_apply(xi);
            Ok(cis_turns(-dot(xi, offset)) * transform(inner, &pulled, opts)?)
        }
        Variant::Convolution { factors } => {
            let mut acc = Complex64::new(1.0, 0.0);
            for f in factors {
                acc *= transform(f, xi, opts)?;
            }
            Ok(acc)
        }
        Variant::Windowed { inner, window } => window::windowed_transform(inner, window, xi[0]),
    }
}

/// Iterates `μ̂(ξ) = φ(ξ/b) μ̂(ξ/b)` with
/// `φ(η) = |D|^{-1} Σ_{d∈D} exp(-2 pi i η d)`.
///
/// Once `|ξ|/b^n` is below the tolerance the remaining factor is replaced by
/// `exp(-2 pi i η mean)`, which is accurate to second order in `η`.
fn self_similar_transform(base: u32, digits: &[u32], xi: f64, opts: &FtOptions) -> Result<Complex64> {
    let b = base as f64;
    let k = digits.len() as f64;
    let mean = digits.iter().map(|&d| d as f64).sum::<f64>() / k / (b - 1.0);
    let mut eta = xi;
    let mut acc = Complex64::new(1.0, 0.0);
    let mut factors = 0;
    while eta.abs() >= opts.self_similar_tol {
        if factors >= opts.max_product_factors {
            return Err(Error::NotConverged(format!(
                "self-similar product at xi = {xi} needs more than {} factors",
                opts.max_product_factors
            )));
        }
        eta /= b;
        let phi: Complex64 = digits.iter().map(|&d| cis_turns(-eta * d as f64)).sum::<Complex64>() / k;
        acc *= phi;
        factors += 1;
        if acc.norm_sqr() == 0.0 {
            return Ok(acc);
        }
    }
    Ok(acc * cis_turns(-eta * mean))
}

/// Factorized transform of a digit-product measure.
///
/// Writing `x = Σ_i x_i b^{-i} + b^{-L} u`, the sum over allowed digit
/// strings splits into one factor per free digit and one per block (the full
/// block sum minus the forbidden-pattern term), times the transform of a
/// single depth-`L` cell.
pub fn digit_product_transform(dp: &DigitProduct, xi: f64) -> Complex64 {
    let b = dp.base;
    let bf = b as f64;
    let digit_sum = |i: u32| -> Complex64 {
        let scaled = xi * bf.powi(-(i as i32));
        (0..b).map(|d| cis_turns(-scaled * d as f64)).sum()
    };
    let mut acc = Complex64::new(1.0, 0.0);
    for i in dp.free_digits() {
        acc *= digit_sum(i) / bf;
    }
    for block in &dp.blocks {
        let mut full = Complex64::new(1.0, 0.0);
        let mut pattern_phase = 0.0;
        for (j, &d) in block.pattern_digits().iter().enumerate() {
            let i = block.offset + 1 + j as u32;
            full *= digit_sum(i);
            let turns = xi * bf.powi(-(i as i32)) * d as f64;
            pattern_phase += turns - turns.round();
        }
        let allowed = full - cis_turns(-pattern_phase);
        acc *= allowed / (bf.powi(block.length as i32) - 1.0);
    }
    acc * unit_interval_exp(-xi * dp.cell_width())
}

fn uses_factorization(m: &Measure) -> bool {
    match m.variant() {
        Variant::SelfSimilarDigit { .. } | Variant::DigitProduct(_) => true,
        Variant::Mixture { components, .. } => components.iter().any(uses_factorization),
        Variant::Convolution { factors } => factors.iter().any(uses_factorization),
        Variant::AffineImage { inner, .. } | Variant::Windowed { inner, .. } => uses_factorization(inner),
        _ => false,
    }
}

/// Evaluates `μ̂` at every schedule frequency, in schedule order.
pub fn ft_batch(m: &Measure, sched: &FrequencySchedule) -> Result<Vec<TransformSample>> {
    let freqs = sched.frequencies()?;
    let method = if uses_factorization(m) { Method::Factorized } else { Method::ClosedForm };
    freqs
        .par_iter()
        .map(|&xi| ft(m, xi).map(|value| TransformSample { xi, value, method }))
        .collect()
}

/// Writes `xi,re,im,abs,log2_abs_xi,log2_abs_value` rows.
pub fn write_samples_csv<W: Write>(samples: &[TransformSample], mut out: W) -> std::io::Result<()> {
    writeln!(out, "xi,re,im,abs,log2_abs_xi,log2_abs_value")?;
    for s in samples {
        let abs = s.value.norm();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            s.xi,
            s.value.re,
            s.value.im,
            abs,
            s.xi.abs().log2(),
            abs.log2()
        )?;
    }
    Ok(())
}
