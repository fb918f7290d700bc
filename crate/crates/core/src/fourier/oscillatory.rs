use crate::numeric::unit_interval_exp;
use num_complex::Complex64;

/// `∫_0^1 exp(2 pi i alpha x) sin(2 pi beta x) dx`, in closed form.
///
/// Uses `exp(2 pi i a x) sin(2 pi b x) = (i/2)(exp(2 pi i (a-b) x) - exp(2 pi i (a+b) x))`
/// and the exact unit-interval integral of each exponential, so the cases
/// `alpha = ±beta` need no special treatment. For integer `l`,
/// `oscillatory_integral(-l, l)` is exactly `-i/2`.
pub fn oscillatory_integral(alpha: f64, beta: f64) -> Complex64 {
    let diff = unit_interval_exp(alpha - beta);
    let sum = unit_interval_exp(alpha + beta);
    Complex64::new(0.0, 0.5) * (diff - sum)
}

/// The bound `1 / ||alpha| - |beta||` on the modulus of [`oscillatory_integral`].
pub fn oscillatory_bound(alpha: f64, beta: f64) -> f64 {
    1.0 / (alpha.abs() - beta.abs()).abs()
}
