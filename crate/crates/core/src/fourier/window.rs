//! Transforms of measures restricted by a polynomial bump.
//!
//! Everything reduces to `∫_lo^hi f(x) exp(-2 pi i xi x) dx` for the bump `f`
//! of a [`Window`], which in the local coordinate `u = (x - c)/r` is
//! `r exp(-2 pi i xi c) ∫ (1-u^2)^m exp(-2 pi i (xi r) u) du`.

use crate::error::{Error, Result};
use crate::measure::{Measure, Scale, Variant, Window};
use crate::numeric::{cis_turns, gl64};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Largest number of digit-product cells enumerated under a window.
const MAX_WINDOW_CELLS: usize = 1 << 20;

/// Above this `|2 pi xi r|` the boundary (integration by parts) formula is used.
fn ibp_threshold(degree: usize) -> f64 {
    4.0 * degree as f64 + 40.0
}

/// Errors if `windowed_transform` cannot handle `inner`.
pub(crate) fn check_windowable(inner: &Measure) -> Result<()> {
    match inner.variant() {
        Variant::Atomic { .. } | Variant::UniformOnIntervals { .. } | Variant::TrigDensity { .. } => Ok(()),
        Variant::DigitProduct(dp) => {
            let cells = (dp.base as u128).checked_pow(dp.depth);
            match cells {
                Some(c) if c <= MAX_WINDOW_CELLS as u128 => Ok(()),
                _ => Err(Error::Unsupported(format!(
                    "windowing a digit product of depth {} (more than {MAX_WINDOW_CELLS} cells)",
                    dp.depth
                ))),
            }
        }
        Variant::Mixture { components, .. } => components.iter().try_for_each(check_windowable),
        Variant::AffineImage { inner, scale: Scale::Scalar(_), mod1: false, .. } => check_windowable(inner),
        Variant::AffineImage { .. } => Err(Error::Unsupported("windowing a mod-1 or matrix affine image".into())),
        Variant::SelfSimilarDigit { .. } => Err(Error::Unsupported("windowing a self-similar measure".into())),
        Variant::Convolution { .. } => Err(Error::Unsupported("windowing a convolution".into())),
        Variant::Windowed { .. } => Err(Error::Unsupported("nested windows".into())),
    }
}

/// Transform of `f dμ` at `xi` for the bump `f` of `window`.
pub(crate) fn windowed_transform(inner: &Measure, window: &Window, xi: f64) -> Result<Complex64> {
    match inner.variant() {
        Variant::Atomic { atoms } => Ok(atoms
            .iter()
            .map(|a| {
                let x = a.position[0];
                cis_turns(-xi * x) * (a.weight * window.value(x))
            })
            .sum()),
        Variant::UniformOnIntervals { intervals } => {
            let total: f64 = intervals.iter().map(|iv| iv.len()).sum();
            Ok(intervals.iter().map(|iv| bump_integral(window, iv.a, iv.b, xi)).sum::<Complex64>() / total)
        }
        Variant::TrigDensity { terms } => {
            let mut acc = bump_integral(window, 0.0, 1.0, xi);
            // sin(2 pi f x) = (e^{2 pi i f x} - e^{-2 pi i f x}) / 2i
            for t in terms {
                let f = t.frequency as f64;
                let up = bump_integral(window, 0.0, 1.0, xi - f);
                let down = bump_integral(window, 0.0, 1.0, xi + f);
                acc += (up - down) / Complex64::new(0.0, 2.0) * t.amplitude;
            }
            Ok(acc)
        }
        Variant::DigitProduct(dp) => {
            let cells = dp
                .allowed_cells(MAX_WINDOW_CELLS)
                .ok_or_else(|| Error::Unsupported("digit product too deep to window".into()))?;
            let width = dp.cell_width();
            let density = 1.0 / (cells.len() as f64 * width);
            let (lo, hi) = (window.lo(), window.hi());
            let sum: Complex64 = cells
                .iter()
                .filter(|&&a| a + width > lo && a < hi)
                .map(|&a| bump_integral(window, a, a + width, xi))
                .sum();
            Ok(sum * density)
        }
        Variant::Mixture { components, weights } => {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, w) in components.iter().zip(weights) {
                acc += windowed_transform(c, window, xi)? * *w;
            }
            Ok(acc)
        }
        Variant::AffineImage { inner, scale: Scale::Scalar(a), offset, mod1: false } => {
            // f(a x + b) is the bump centred at (c - b)/a with radius r/|a|.
            let b = offset[0];
            let pulled = Window { center: (window.center - b) / a, radius: window.radius / a.abs(), order: window.order };
            Ok(cis_turns(-xi * b) * windowed_transform(inner, &pulled, a * xi)?)
        }
        _ => {
            check_windowable(inner)?;
            unreachable!("check_windowable accepts only the variants handled above")
        }
    }
}

/// `∫_{[lo,hi] ∩ supp f} f(x) exp(-2 pi i xi x) dx`.
pub(crate) fn bump_integral(window: &Window, lo: f64, hi: f64, xi: f64) -> Complex64 {
    let (c, r) = (window.center, window.radius);
    let u0 = if lo <= c - r { -1.0 } else { ((lo - c) / r).min(1.0) };
    let u1 = if hi >= c + r { 1.0 } else { ((hi - c) / r).max(-1.0) };
    if u1 <= u0 {
        return Complex64::new(0.0, 0.0);
    }
    let omega = xi * r;
    cis_turns(-xi * c) * local_integral(window.order, u0, u1, omega) * r
}

/// Coefficients of `(1 - u^2)^m` in increasing powers of `u`.
fn bump_polynomial(order: u32) -> Vec<f64> {
    let m = order as usize;
    let mut coeffs = vec![0.0; 2 * m + 1];
    let mut binom = 1.0;
    for j in 0..=m {
        coeffs[2 * j] = if j % 2 == 0 { binom } else { -binom };
        binom = binom * (m - j) as f64 / (j + 1) as f64;
    }
    coeffs
}

fn horner(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c)
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect()
}

/// `∫_{u0}^{u1} (1-u^2)^m exp(-2 pi i omega u) du`.
fn local_integral(order: u32, u0: f64, u1: f64, omega: f64) -> Complex64 {
    let poly = bump_polynomial(order);
    let degree = poly.len() - 1;
    let beta_abs = 2.0 * PI * omega.abs();
    if beta_abs >= ibp_threshold(degree) {
        // ∫ P e^{βu} = [e^{βu} Σ_k (-1)^k P^(k)(u) / β^(k+1)], β = -2πiω.
        let beta = Complex64::new(0.0, -2.0 * PI * omega);
        let mut derivs = vec![poly];
        for _ in 0..degree {
            let next = derivative(derivs.last().unwrap());
            derivs.push(next);
        }
        let boundary = |u: f64| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut beta_pow = beta;
            for (k, d) in derivs.iter().enumerate() {
                let term = horner(d, u) / beta_pow;
                acc += if k % 2 == 0 { term } else { -term };
                beta_pow *= beta;
            }
            acc * cis_turns(-omega * u)
        };
        boundary(u1) - boundary(u0)
    } else {
        // Each panel carries at most ~40 radians of phase.
        let panels = ((beta_abs * (u1 - u0) / 40.0).ceil() as usize).max(1);
        let h = (u1 - u0) / panels as f64;
        let rule = gl64();
        (0..panels)
            .map(|p| {
                let a = u0 + p as f64 * h;
                rule.integrate(a, a + h, |u| cis_turns(-omega * u) * horner(&poly, u))
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::GaussLegendre;

    fn brute(order: u32, u0: f64, u1: f64, omega: f64) -> Complex64 {
        let rule = GaussLegendre::new(40);
        let panels = 4000;
        let h = (u1 - u0) / panels as f64;
        (0..panels)
            .map(|p| {
                let a = u0 + p as f64 * h;
                rule.integrate(a, a + h, |u| {
                    Complex64::from_polar(1.0, -2.0 * PI * omega * u) * (1.0 - u * u).powi(order as i32)
                })
            })
            .sum()
    }

    #[test]
    fn polynomial_coefficients() {
        assert_eq!(bump_polynomial(2), vec![1.0, 0.0, -2.0, 0.0, 1.0]);
        assert_eq!(bump_polynomial(3), vec![1.0, 0.0, -3.0, 0.0, 3.0, 0.0, -1.0]);
    }

    #[test]
    fn both_branches_agree_with_brute_force() {
        for &order in &[1u32, 2, 3, 6] {
            for &(u0, u1) in &[(-1.0, 1.0), (-0.3, 1.0), (-1.0, 0.45), (-0.2, 0.7)] {
                for &omega in &[0.0, 0.7, 3.1, 9.5, 17.0, 40.0, 123.4] {
                    let got = local_integral(order, u0, u1, omega);
                    let want = brute(order, u0, u1, omega);
                    assert!((got - want).norm() < 1e-11, "order {order} [{u0},{u1}] omega {omega}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn mass_of_full_bump() {
        // ∫_{-1}^{1} (1-u^2)^2 du = 16/15
        let w = Window::new(0.5, 0.25, 2).unwrap();
        let v = bump_integral(&w, -5.0, 5.0, 0.0);
        assert!((v.re - 0.25 * 16.0 / 15.0).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }
}
