use super::ft;
use crate::error::{Error, Result};
use crate::measure::Measure;
use rayon::prelude::*;

/// `(1/2T) ∫_{-T}^{T} |μ̂(ξ)|^2 dξ` for a one-dimensional measure.
///
/// Trapezoidal rule on `[0, T]` (the integrand is even). The step is at most
/// 0.01 and at most a tenth of the period of the fastest oscillation of
/// `|μ̂|^2`, whose frequencies are differences of support points.
pub fn wiener_average(m: &Measure, t: f64) -> Result<f64> {
    if m.ambient_dim() != 1 {
        return Err(Error::Unsupported("Wiener averages are implemented for d = 1 only".into()));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("averaging half-width must be positive, got {t}")));
    }
    let (lo, hi) = m.support_bounds();
    let spread = (hi - lo).max(0.0);
    let step = if spread > 0.0 { 0.01f64.min(1.0 / (10.0 * spread)) } else { 0.01 };
    let n = (t / step).ceil() as usize;
    let h = t / n as f64;
    let values: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|k| ft(m, k as f64 * h).map(|z| z.norm_sqr()))
        .collect::<Result<_>>()?;
    let interior: f64 = values[1..n].iter().sum();
    let integral = h * (0.5 * (values[0] + values[n]) + interior);
    Ok(integral / t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirac_is_one() {
        let v = wiener_average(&Measure::dirac(0.37).unwrap(), 123.0).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lebesgue_tends_to_zero() {
        assert!(wiener_average(&Measure::lebesgue(), 1e3).unwrap() < 1e-2);
    }
}
