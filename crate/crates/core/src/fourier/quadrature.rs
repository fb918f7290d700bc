//! Filon-type quadrature, an oracle independent of the closed forms.
//!
//! A measure is first flattened into atoms plus a sum of pieces
//! `coef * g(x) * exp(2 pi i nu x)` on intervals, with `g` smooth and real.
//! Each piece is integrated against the kernel by interpolating `g` at nine
//! Chebyshev-Lobatto nodes per panel and integrating the interpolant against
//! the exponential exactly (monomial moments), with dyadic panel refinement.

use crate::error::{Error, Result};
use crate::measure::{Measure, Scale, Variant, Window};
use crate::numeric::{cis_turns, GaussLegendre};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

const NODES: usize = 9;
const MAX_LEVEL: u32 = 40;
const MAX_CELLS: usize = 1 << 16;
/// Below this `|theta|` moments come from their power series.
const SERIES_THRESHOLD: f64 = 4.0;

type Amplitude = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
struct Piece {
    lo: f64,
    hi: f64,
    coef: Complex64,
    nu: f64,
    g: Amplitude,
    /// Already the result of a convolution; not convolved again.
    convolved: bool,
    /// Interior points where `g` is not smooth.
    kinks: Vec<f64>,
}

#[derive(Clone, Default)]
struct DensityForm {
    atoms: Vec<(f64, f64)>,
    pieces: Vec<Piece>,
}

fn constant(v: f64) -> Amplitude {
    Arc::new(move |_| v)
}

fn flatten(m: &Measure) -> Result<DensityForm> {
    if m.ambient_dim() != 1 {
        return Err(Error::Unsupported("quadrature oracle is one-dimensional".into()));
    }
    let piece = |lo, hi, coef, nu, g| Piece { lo, hi, coef, nu, g, convolved: false, kinks: vec![] };
    let one = Complex64::new(1.0, 0.0);
    match m.variant() {
        Variant::Atomic { atoms } => Ok(DensityForm {
            atoms: atoms.iter().map(|a| (a.position[0], a.weight)).collect(),
            pieces: vec![],
        }),
        Variant::UniformOnIntervals { intervals } => {
            let total: f64 = intervals.iter().map(|iv| iv.len()).sum();
            let pieces = intervals.iter().map(|iv| piece(iv.a, iv.b, one, 0.0, constant(1.0 / total))).collect();
            Ok(DensityForm { atoms: vec![], pieces })
        }
        Variant::TrigDensity { terms } => {
            let mut pieces = vec![piece(0.0, 1.0, one, 0.0, constant(1.0))];
            for t in terms {
                // c sin(2 pi f x) = (c / 2i) (e^{2 pi i f x} - e^{-2 pi i f x})
                let c = Complex64::new(0.0, -0.5 * t.amplitude);
                let f = t.frequency as f64;
                pieces.push(piece(0.0, 1.0, c, f, constant(1.0)));
                pieces.push(piece(0.0, 1.0, -c, -f, constant(1.0)));
            }
            Ok(DensityForm { atoms: vec![], pieces })
        }
        Variant::DigitProduct(dp) => {
            let cells = dp
                .allowed_cells(MAX_CELLS)
                .ok_or_else(|| Error::Unsupported(format!("digit product with more than {MAX_CELLS} cells")))?;
            let w = dp.cell_width();
            let density = 1.0 / (cells.len() as f64 * w);
            // Merge adjacent cells into maximal intervals.
            let mut runs: Vec<(f64, f64)> = Vec::new();
            for a in cells {
                match runs.last_mut() {
                    Some(last) if last.1 == a => last.1 = a + w,
                    _ => runs.push((a, a + w)),
                }
            }
            let pieces = runs.into_iter().map(|(a, b)| piece(a, b, one, 0.0, constant(density))).collect();
            Ok(DensityForm { atoms: vec![], pieces })
        }
        Variant::SelfSimilarDigit { .. } => {
            Err(Error::Unsupported("self-similar measures have no density or atomic form".into()))
        }
        Variant::Mixture { components, weights } => {
            let mut out = DensityForm::default();
            for (c, &w) in components.iter().zip(weights) {
                let f = flatten(c)?;
                out.atoms.extend(f.atoms.into_iter().map(|(x, v)| (x, v * w)));
                out.pieces.extend(f.pieces.into_iter().map(|p| Piece { coef: p.coef * w, ..p }));
            }
            Ok(out)
        }
        Variant::AffineImage { inner, scale, offset, mod1 } => {
            let a = match scale {
                Scale::Scalar(a) => *a,
                Scale::Matrix(_) => return Err(Error::Unsupported("matrix images in the quadrature oracle".into())),
            };
            let b = offset[0];
            let f = flatten(inner)?;
            if *mod1 {
                if !f.pieces.is_empty() {
                    return Err(Error::Unsupported("mod-1 images of densities in the quadrature oracle".into()));
                }
                return Ok(DensityForm {
                    atoms: f.atoms.into_iter().map(|(x, w)| ((a * x + b).rem_euclid(1.0), w)).collect(),
                    pieces: vec![],
                });
            }
            let atoms = f.atoms.into_iter().map(|(x, w)| (a * x + b, w)).collect();
            let pieces = f
                .pieces
                .into_iter()
                .map(|p| {
                    let (u, v) = (a * p.lo + b, a * p.hi + b);
                    let g = p.g.clone();
                    // y = (x - b)/a; e^{2 pi i nu y} = e^{-2 pi i nu b/a} e^{2 pi i (nu/a) x}
                    Piece {
                        lo: u.min(v),
                        hi: u.max(v),
                        coef: p.coef * cis_turns(-p.nu * b / a),
                        nu: p.nu / a,
                        g: Arc::new(move |x| g((x - b) / a) / a.abs()),
                        convolved: p.convolved,
                        kinks: p.kinks.iter().map(|k| a * k + b).collect(),
                    }
                })
                .collect();
            Ok(DensityForm { atoms, pieces })
        }
        Variant::Convolution { factors } => {
            let mut acc = DensityForm { atoms: vec![(0.0, 1.0)], pieces: vec![] };
            for f in factors {
                acc = convolve(&acc, &flatten(f)?)?;
            }
            Ok(acc)
        }
        Variant::Windowed { inner, window } => {
            let f = flatten(inner)?;
            let atoms = f.atoms.into_iter().map(|(x, w)| (x, w * window.value(x))).filter(|a| a.1 > 0.0).collect();
            let pieces = f.pieces.into_iter().filter_map(|p| restrict(p, *window)).collect();
            Ok(DensityForm { atoms, pieces })
        }
    }
}

fn restrict(p: Piece, window: Window) -> Option<Piece> {
    let lo = p.lo.max(window.lo());
    let hi = p.hi.min(window.hi());
    if hi <= lo {
        return None;
    }
    let g = p.g.clone();
    Some(Piece { lo, hi, g: Arc::new(move |x| g(x) * window.value(x)), ..p })
}

fn shift(p: &Piece, t: f64, w: f64) -> Piece {
    let g = p.g.clone();
    Piece {
        lo: p.lo + t,
        hi: p.hi + t,
        coef: p.coef * cis_turns(-p.nu * t) * w,
        nu: p.nu,
        g: Arc::new(move |x| g(x - t)),
        convolved: p.convolved,
        kinks: p.kinks.iter().map(|k| k + t).collect(),
    }
}

fn convolve(a: &DensityForm, b: &DensityForm) -> Result<DensityForm> {
    let mut out = DensityForm::default();
    for &(x, v) in &a.atoms {
        for &(y, w) in &b.atoms {
            out.atoms.push((x + y, v * w));
        }
        out.pieces.extend(b.pieces.iter().map(|p| shift(p, x, v)));
    }
    for &(y, w) in &b.atoms {
        out.pieces.extend(a.pieces.iter().map(|p| shift(p, y, w)));
    }
    for p in &a.pieces {
        for q in &b.pieces {
            out.pieces.push(convolve_pieces(p, q)?);
        }
    }
    Ok(out)
}

/// Density of the convolution of two non-oscillating pieces, evaluated by an
/// inner Gauss-Legendre rule over the overlap.
fn convolve_pieces(p: &Piece, q: &Piece) -> Result<Piece> {
    if p.convolved || q.convolved || p.nu != 0.0 || q.nu != 0.0 {
        return Err(Error::Unsupported("quadrature oracle handles a single convolution of smooth densities".into()));
    }
    let (pa, pb, qa, qb) = (p.lo, p.hi, q.lo, q.hi);
    let (gp, gq) = (p.g.clone(), q.g.clone());
    let inner = inner_rule();
    let g: Amplitude = Arc::new(move |x| {
        let lo = pa.max(x - qb);
        let hi = pb.min(x - qa);
        if hi <= lo {
            return 0.0;
        }
        inner.integrate(lo, hi, |y| gp(y) * gq(x - y))
    });
    let mut kinks = vec![pa + qb, pb + qa];
    kinks.sort_by(f64::total_cmp);
    Ok(Piece { lo: pa + qa, hi: pb + qb, coef: p.coef * q.coef, nu: 0.0, g, convolved: true, kinks })
}

fn inner_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(24))
}

/// Nodes `cos(pi k / 8)` and the inverse Vandermonde matrix mapping values
/// at the nodes to monomial coefficients.
struct Interpolation {
    nodes: [f64; NODES],
    inverse: [[f64; NODES]; NODES],
}

fn interpolation() -> &'static Interpolation {
    static TABLE: OnceLock<Interpolation> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut nodes = [0.0; NODES];
        for (k, n) in nodes.iter_mut().enumerate() {
            *n = (PI * k as f64 / (NODES - 1) as f64).cos();
        }
        nodes[(NODES - 1) / 2] = 0.0;
        // Solve V c = e_j column by column, V[i][k] = nodes[i]^k.
        let mut v = [[0.0; NODES]; NODES];
        for i in 0..NODES {
            for k in 0..NODES {
                v[i][k] = nodes[i].powi(k as i32);
            }
        }
        let mut inverse = [[0.0; NODES]; NODES];
        for j in 0..NODES {
            let mut a = v;
            let mut rhs = [0.0; NODES];
            rhs[j] = 1.0;
            for col in 0..NODES {
                let piv = (col..NODES).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
                a.swap(col, piv);
                rhs.swap(col, piv);
                for row in col + 1..NODES {
                    let f = a[row][col] / a[col][col];
                    for k in col..NODES {
                        a[row][k] -= f * a[col][k];
                    }
                    rhs[row] -= f * rhs[col];
                }
            }
            let mut c = [0.0; NODES];
            for row in (0..NODES).rev() {
                let s: f64 = (row + 1..NODES).map(|k| a[row][k] * c[k]).sum();
                c[row] = (rhs[row] - s) / a[row][row];
            }
            for k in 0..NODES {
                inverse[k][j] = c[k];
            }
        }
        Interpolation { nodes, inverse }
    })
}

/// `M_k = ∫_{-1}^{1} t^k exp(-2 pi i tau t) dt` for `k < NODES`.
fn moments(tau: f64) -> [Complex64; NODES] {
    let theta = 2.0 * PI * tau;
    let mut m = [Complex64::new(0.0, 0.0); NODES];
    if theta.abs() <= SERIES_THRESHOLD {
        // Σ_n (-i theta)^n / n! * ∫ t^{k+n}
        let z = Complex64::new(0.0, -theta);
        for (k, mk) in m.iter_mut().enumerate() {
            let mut term = Complex64::new(1.0, 0.0);
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..80 {
                if (k + n) % 2 == 0 {
                    acc += term * (2.0 / (k + n + 1) as f64);
                }
                term = term * z / (n + 1) as f64;
                if term.norm() < 1e-18 {
                    break;
                }
            }
            *mk = acc;
        }
    } else {
        // M_k = (e^{-i theta} - (-1)^k e^{i theta}) / (-i theta) + k M_{k-1} / (i theta)
        let e_minus = cis_turns(-tau);
        let e_plus = cis_turns(tau);
        let neg_i_theta = Complex64::new(0.0, -theta);
        let i_theta = Complex64::new(0.0, theta);
        for k in 0..NODES {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let boundary = (e_minus - e_plus * sign) / neg_i_theta;
            m[k] = if k == 0 { boundary } else { boundary + m[k - 1] * k as f64 / i_theta };
        }
    }
    m
}

/// `∫_a^b g(x) exp(-2 pi i omega x) dx` on a single panel.
fn panel(g: &Amplitude, a: f64, b: f64, omega: f64) -> Complex64 {
    let table = interpolation();
    let h = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let values: Vec<f64> = table.nodes.iter().map(|t| g(mid + h * t)).collect();
    let mom = moments(omega * h);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..NODES {
        let ck: f64 = (0..NODES).map(|j| table.inverse[k][j] * values[j]).sum();
        acc += mom[k] * ck;
    }
    acc * cis_turns(-omega * mid) * h
}

fn adaptive(g: &Amplitude, a: f64, b: f64, omega: f64, whole: Complex64, tol: f64, level: u32) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let left = panel(g, a, m, omega);
    let right = panel(g, m, b, omega);
    let refined = left + right;
    let diff = (refined - whole).norm();
    let floor = 1e-15 * (b - a) * (g(a).abs() + g(m).abs() + g(b).abs());
    if diff <= tol || diff <= floor {
        return Ok(refined);
    }
    if level >= MAX_LEVEL {
        return Err(Error::QuadratureTolerance { tol, achieved: diff });
    }
    Ok(adaptive(g, a, m, omega, left, 0.5 * tol, level + 1)? + adaptive(g, m, b, omega, right, 0.5 * tol, level + 1)?)
}

fn piece_integral(p: &Piece, a: f64, b: f64, omega: f64, tol: f64) -> Result<Complex64> {
    let mut breaks = vec![a];
    breaks.extend(p.kinks.iter().copied().filter(|k| *k > a && *k < b));
    breaks.push(b);
    let mut sum = Complex64::new(0.0, 0.0);
    for w in breaks.windows(2) {
        let share = tol * (w[1] - w[0]) / (b - a);
        let whole = panel(&p.g, w[0], w[1], omega);
        sum += adaptive(&p.g, w[0], w[1], omega, whole, share, 0)?;
    }
    Ok(sum)
}

/// Masses of the `n` equal cells of `[lo, hi]`, or `None` if the measure
/// has atoms. Each cell mass is accurate to about `tol / n`.
pub(crate) fn cell_masses(m: &Measure, lo: f64, hi: f64, n: usize, tol: f64) -> Result<Option<Vec<f64>>> {
    let form = flatten(m)?;
    if !form.atoms.is_empty() {
        return Ok(None);
    }
    let h = (hi - lo) / n as f64;
    let mut masses = vec![0.0; n];
    for p in &form.pieces {
        let scale = p.coef.norm().max(f64::MIN_POSITIVE);
        let first = (((p.lo - lo) / h).floor().max(0.0) as usize).min(n - 1);
        let last = (((p.hi - lo) / h).ceil().max(1.0) as usize).min(n);
        for (i, cell) in masses.iter_mut().enumerate().take(last).skip(first) {
            let a = (lo + i as f64 * h).max(p.lo);
            let b = (lo + (i + 1) as f64 * h).min(p.hi);
            if b <= a {
                continue;
            }
            // ∫ g e^{2 pi i nu x} is the kernel integral at omega = -nu.
            let v = piece_integral(p, a, b, -p.nu, tol / (n as f64 * scale))?;
            *cell += (v * p.coef).re;
        }
    }
    Ok(Some(masses))
}

/// Approximates `μ̂(xi)` to absolute error `tol` without using any of the
/// closed-form transforms.
///
/// Supports atoms, interval and trigonometric densities, digit products up to
/// 2^16 cells, mixtures, scalar affine images (mod-1 only for atoms), windows,
/// and one level of convolution between smooth densities.
pub fn ft_quadrature(m: &Measure, xi: f64, tol: f64) -> Result<Complex64> {
    if !(tol > 0.0) || !xi.is_finite() {
        return Err(Error::InvalidArgument(format!("need finite xi and tol > 0, got ({xi}, {tol})")));
    }
    let form = flatten(m)?;
    let mut acc: Complex64 = form.atoms.iter().map(|&(x, w)| cis_turns(-xi * x) * w).sum();
    let total_len: f64 = form.pieces.iter().map(|p| (p.hi - p.lo) * p.coef.norm()).sum();
    for p in &form.pieces {
        let omega = xi - p.nu;
        let budget = 0.5 * tol * (p.hi - p.lo) * p.coef.norm() / total_len.max(f64::MIN_POSITIVE);
        let piece_sum = piece_integral(p, p.lo, p.hi, omega, budget / p.coef.norm().max(f64::MIN_POSITIVE))?;
        acc += piece_sum * p.coef;
    }
    Ok(acc)
}
