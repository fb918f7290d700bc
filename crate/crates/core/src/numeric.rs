//! Argument-reduced trigonometry and Gauss-Legendre rules.
//!
//! Transforms are probed at frequencies up to 2^40 and beyond, where
//! `(2.0 * PI * x).sin()` has lost every significant digit. All phases in
//! this crate are therefore carried in *turns* (or half-turns) and reduced
//! exactly before the libm call.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Returns `(sin(pi x), cos(pi x))`.
///
/// Exact at multiples of 1/2: `sin_cos_pi(k as f64)` is `(0.0, ±1.0)` for
/// every integer `k`.
pub fn sin_cos_pi(x: f64) -> (f64, f64) {
    if !x.is_finite() {
        return (f64::NAN, f64::NAN);
    }
    // r in [-1, 1]; the subtraction is exact.
    let r = x - 2.0 * (x * 0.5).round();
    let quarter = (2.0 * r).round();
    let f = r - 0.5 * quarter;
    let (s, c) = (PI * f).sin_cos();
    match quarter as i64 {
        0 => (s, c),
        1 => (c, -s),
        -1 => (-c, s),
        2 | -2 => (-s, -c),
        _ => unreachable!("reduced argument out of range"),
    }
}

/// `exp(2 pi i t)`, with `t` reduced modulo one before evaluation.
pub fn cis_turns(t: f64) -> Complex64 {
    let (s, c) = sin_cos_pi(2.0 * t);
    Complex64::new(c, s)
}

/// `sin(pi x) / (pi x)`, with value 1 at the origin.
pub fn sinc_pi(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if x.abs() < 1e-4 {
        let y = PI * x;
        let y2 = y * y;
        return 1.0 - y2 / 6.0 + y2 * y2 / 120.0;
    }
    sin_cos_pi(x).0 / (PI * x)
}

/// `∫_0^1 exp(2 pi i gamma x) dx`.
///
/// Written as `exp(pi i gamma) sinc(pi gamma)`; exactly zero at nonzero
/// integers and exactly one at zero.
pub fn unit_interval_exp(gamma: f64) -> Complex64 {
    let (s, c) = sin_cos_pi(gamma);
    if gamma == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let sinc = if gamma.abs() < 1e-4 { sinc_pi(gamma) } else { s / (PI * gamma) };
    Complex64::new(c, s) * sinc
}

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<T, F>(&self, a: f64, b: f64, mut f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: FnMut(f64) -> T,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = T::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * (w * half);
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared 64-point rule.
pub fn gl64() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(64))
}

/// Shared 8-point rule.
pub fn gl8() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(8))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_cos_pi_exact_at_integers() {
        for k in -50i64..50 {
            let (s, c) = sin_cos_pi(k as f64);
            assert_eq!(s, 0.0);
            assert_eq!(c.abs(), 1.0);
        }
        let big = 2f64.powi(60) + 2048.0;
        assert_eq!(sin_cos_pi(big).0, 0.0);
    }

    #[test]
    fn sin_cos_pi_matches_libm_for_small_arguments() {
        for i in 0..1000 {
            let x = -3.0 + 6.0 * i as f64 / 999.0;
            let (s, c) = sin_cos_pi(x);
            assert!((s - (PI * x).sin()).abs() < 1e-14);
            assert!((c - (PI * x).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn unit_interval_exp_integer_and_zero() {
        assert_eq!(unit_interval_exp(0.0), Complex64::new(1.0, 0.0));
        for k in 1..40 {
            assert_eq!(unit_interval_exp(k as f64).norm(), 0.0);
            assert_eq!(unit_interval_exp(-(k as f64)).norm(), 0.0);
        }
        // (e^{2 pi i g} - 1)/(2 pi i g) at g = 0.3
        let g = 0.3;
        let direct = (Complex64::new(0.0, 2.0 * PI * g).exp() - 1.0) / Complex64::new(0.0, 2.0 * PI * g);
        assert!((unit_interval_exp(g) - direct).norm() < 1e-15);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = GaussLegendre::new(8);
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        // ∫_0^2 x^15 dx = 2^16 / 16
        let v: f64 = rule.integrate(0.0, 2.0, |x| x.powi(15));
        assert!((v - 4096.0).abs() < 1e-9);
        let rule = gl64();
        let v: f64 = rule.integrate(0.0, PI, |x| x.sin());
        assert!((v - 2.0).abs() < 1e-14);
    }
}
