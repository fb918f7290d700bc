//! Symbolic finite Borel measures with a closed algebra.
//!
//! A [`Measure`] is an immutable expression tree. Leaves are the measures whose
//! Fourier transforms are known in closed form (atoms, uniform densities,
//! trigonometric densities, self-similar digit measures, digit-product
//! measures); inner nodes are mixtures, affine images, convolutions and
//! restrictions by a polynomial bump window.

mod digits;

pub use digits::{DigitBlock, DigitProduct};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A point mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub position: Vec<f64>,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn is_empty(&self) -> bool {
        self.b <= self.a
    }
}

/// One term `c sin(2 pi f x)` of a trigonometric density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub amplitude: f64,
    pub frequency: u64,
}

/// Linear part of an affine map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scale {
    Scalar(f64),
    Matrix(Vec<Vec<f64>>),
}

impl Scale {
    /// Applies the transpose of the linear part to a frequency vector.
    pub(crate) fn transpose_apply(&self, xi: &[f64]) -> Vec<f64> {
        match self {
            Scale::Scalar(a) => xi.iter().map(|x| a * x).collect(),
            Scale::Matrix(m) => (0..xi.len())
                .map(|j| (0..xi.len()).map(|i| m[i][j] * xi[i]).sum())
                .collect(),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Scale::Scalar(a) => x.iter().map(|v| a * v).collect(),
            Scale::Matrix(m) => m
                .iter()
                .map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum())
                .collect(),
        }
    }
}

/// The bump `f(x) = ((1 - ((x - center)/radius)^2)_+)^order`, peak value one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub center: f64,
    pub radius: f64,
    pub order: u32,
}

impl Window {
    pub const MAX_ORDER: u32 = 16;

    pub fn new(center: f64, radius: f64, order: u32) -> Result<Self> {
        let w = Self { center, radius, order };
        w.validate()?;
        Ok(w)
    }

    fn validate(&self) -> Result<()> {
        if !self.center.is_finite() || !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "window needs finite center and positive radius, got ({}, {})",
                self.center, self.radius
            )));
        }
        if self.order == 0 || self.order > Self::MAX_ORDER {
            return Err(Error::InvalidArgument(format!(
                "window order must lie in 1..={}, got {}",
                Self::MAX_ORDER,
                self.order
            )));
        }
        Ok(())
    }

    pub fn value(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.radius;
        if u.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - u * u).powi(self.order as i32)
        }
    }

    pub fn lo(&self) -> f64 {
        self.center - self.radius
    }

    pub fn hi(&self) -> f64 {
        self.center + self.radius
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Variant {
    Atomic {
        atoms: Vec<Atom>,
    },
    UniformOnIntervals {
        intervals: Vec<Interval>,
    },
    TrigDensity {
        terms: Vec<TrigTerm>,
    },
    SelfSimilarDigit {
        base: u32,
        allowed_digits: Vec<u32>,
    },
    DigitProduct(DigitProduct),
    Mixture {
        components: Vec<Measure>,
        weights: Vec<f64>,
    },
    AffineImage {
        inner: Box<Measure>,
        scale: Scale,
        offset: Vec<f64>,
        mod1: bool,
    },
    Convolution {
        factors: Vec<Measure>,
    },
    Windowed {
        inner: Box<Measure>,
        window: Window,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct MeasureRepr {
    ambient_dim: usize,
    variant: Variant,
}

/// A finite positive Borel measure, validated at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub struct Measure {
    ambient_dim: usize,
    variant: Variant,
}

impl TryFrom<MeasureRepr> for Measure {
    type Error = Error;

    fn try_from(repr: MeasureRepr) -> Result<Self> {
        Measure::new(repr.ambient_dim, repr.variant)
    }
}

impl From<Measure> for MeasureRepr {
    fn from(m: Measure) -> Self {
        MeasureRepr { ambient_dim: m.ambient_dim, variant: m.variant }
    }
}

const UNIT_SLACK: f64 = 1e-12;

fn in_unit(x: f64) -> bool {
    (-UNIT_SLACK..=1.0 + UNIT_SLACK).contains(&x)
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidMeasure(msg.into()))
}

impl Measure {
    pub fn new(ambient_dim: usize, variant: Variant) -> Result<Self> {
        let m = Self { ambient_dim, variant };
        m.validate()?;
        Ok(m)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    fn validate(&self) -> Result<()> {
        let d = self.ambient_dim;
        if d == 0 {
            return invalid("ambient dimension must be positive");
        }
        let need_1d = |name: &str| -> Result<()> {
            if d != 1 {
                return invalid(format!("{name} requires ambient dimension 1, got {d}"));
            }
            Ok(())
        };
        match &self.variant {
            Variant::Atomic { atoms } => {
                if atoms.is_empty() {
                    return invalid("atomic measure needs at least one atom");
                }
                for atom in atoms {
                    if atom.position.len() != d {
                        return Err(Error::DimensionMismatch { expected: d, found: atom.position.len() });
                    }
                    if !(atom.weight > 0.0) || !atom.weight.is_finite() {
                        return invalid(format!("atom weight must be positive and finite, got {}", atom.weight));
                    }
                    if !atom.position.iter().all(|&x| x.is_finite() && in_unit(x)) {
                        return invalid(format!("atom position {:?} outside [0,1]^d", atom.position));
                    }
                }
            }
            Variant::UniformOnIntervals { intervals } => {
                need_1d("UniformOnIntervals")?;
                if intervals.is_empty() {
                    return invalid("UniformOnIntervals needs at least one interval");
                }
                let mut sorted = intervals.clone();
                sorted.sort_by(|p, q| p.a.total_cmp(&q.a));
                for iv in &sorted {
                    if !(iv.a < iv.b) || !in_unit(iv.a) || !in_unit(iv.b) {
                        return invalid(format!("interval ({}, {}) must satisfy 0 <= a < b <= 1", iv.a, iv.b));
                    }
                }
                if sorted.windows(2).any(|w| w[1].a < w[0].b) {
                    return invalid("intervals must be disjoint");
                }
            }
            Variant::TrigDensity { terms } => {
                need_1d("TrigDensity")?;
                let total: f64 = terms.iter().map(|t| t.amplitude.abs()).sum();
                if terms.iter().any(|t| t.frequency == 0 || !t.amplitude.is_finite()) {
                    return invalid("trigonometric terms need positive integer frequencies and finite amplitudes");
                }
                if total > 1.0 + 1e-15 {
                    return invalid(format!("sum of |amplitude| is {total}, must be <= 1 for a nonnegative density"));
                }
            }
            Variant::SelfSimilarDigit { base, allowed_digits } => {
                need_1d("SelfSimilarDigit")?;
                if *base < 2 {
                    return invalid("self-similar base must be at least 2");
                }
                if allowed_digits.is_empty() || allowed_digits.iter().any(|&dg| dg >= *base) {
                    return invalid("allowed digits must be a nonempty subset of 0..base");
                }
                let mut seen = allowed_digits.clone();
                seen.sort_unstable();
                seen.dedup();
                if seen.len() != allowed_digits.len() {
                    return invalid("allowed digits must be distinct");
                }
            }
            Variant::DigitProduct(dp) => {
                need_1d("DigitProduct")?;
                dp.validate()?;
            }
            Variant::Mixture { components, weights } => {
                if components.is_empty() || components.len() != weights.len() {
                    return invalid("mixture needs equally many (nonzero) components and weights");
                }
                for c in components {
                    if c.ambient_dim != d {
                        return Err(Error::DimensionMismatch { expected: d, found: c.ambient_dim });
                    }
                }
                if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
                    return invalid("mixture weights must be positive and finite");
                }
            }
            Variant::AffineImage { inner, scale, offset, mod1 } => {
                if inner.ambient_dim != d {
                    return Err(Error::DimensionMismatch { expected: d, found: inner.ambient_dim });
                }
                if offset.len() != d || offset.iter().any(|b| !b.is_finite()) {
                    return invalid("affine offset must be a finite vector of the ambient dimension");
                }
                match scale {
                    Scale::Scalar(a) => {
                        if *a == 0.0 || !a.is_finite() {
                            return Err(Error::SingularScale);
                        }
                    }
                    Scale::Matrix(m) => {
                        if m.len() != d || m.iter().any(|row| row.len() != d) {
                            return invalid("matrix scale must be d x d");
                        }
                        if determinant(m).abs() < 1e-14 {
                            return Err(Error::SingularScale);
                        }
                    }
                }
                if *mod1 {
                    need_1d("mod-1 affine image")?;
                    match scale {
                        Scale::Scalar(a) if a.fract() == 0.0 => {}
                        _ => return invalid("mod-1 affine image requires an integer scalar scale"),
                    }
                    let (lo, hi) = inner.support_bounds();
                    if !in_unit(lo) || !in_unit(hi) {
                        return invalid("mod-1 affine image requires the inner measure supported in [0,1]");
                    }
                }
            }
            Variant::Convolution { factors } => {
                if factors.is_empty() {
                    return invalid("convolution needs at least one factor");
                }
                for f in factors {
                    if f.ambient_dim != d {
                        return Err(Error::DimensionMismatch { expected: d, found: f.ambient_dim });
                    }
                }
            }
            Variant::Windowed { inner, window } => {
                need_1d("Windowed")?;
                window.validate()?;
                if inner.ambient_dim != 1 {
                    return Err(Error::DimensionMismatch { expected: 1, found: inner.ambient_dim });
                }
                crate::fourier::window::check_windowable(inner)?;
            }
        }
        Ok(())
    }

    // ---- leaf constructors -------------------------------------------------

    pub fn atomic(atoms: Vec<Atom>) -> Result<Self> {
        let d = atoms.first().map(|a| a.position.len()).unwrap_or(1);
        Self::new(d, Variant::Atomic { atoms })
    }

    /// One-dimensional atomic measure from `(position, weight)` pairs.
    pub fn atomic_1d(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::atomic(atoms.iter().map(|&(x, w)| Atom { position: vec![x], weight: w }).collect())
    }

    pub fn dirac(x: f64) -> Result<Self> {
        Self::atomic_1d(&[(x, 1.0)])
    }

    /// Lebesgue measure on [0, 1].
    pub fn lebesgue() -> Self {
        Self::uniform_on_intervals(&[(0.0, 1.0)]).expect("unit interval is valid")
    }

    pub fn uniform_on_intervals(intervals: &[(f64, f64)]) -> Result<Self> {
        let intervals = intervals.iter().map(|&(a, b)| Interval { a, b }).collect();
        Self::new(1, Variant::UniformOnIntervals { intervals })
    }

    pub fn trig_density(terms: &[(f64, u64)]) -> Result<Self> {
        let terms = terms.iter().map(|&(amplitude, frequency)| TrigTerm { amplitude, frequency }).collect();
        Self::new(1, Variant::TrigDensity { terms })
    }

    pub fn self_similar_digit(base: u32, allowed_digits: &[u32]) -> Result<Self> {
        Self::new(1, Variant::SelfSimilarDigit { base, allowed_digits: allowed_digits.to_vec() })
    }

    pub fn digit_product(dp: DigitProduct) -> Result<Self> {
        Self::new(1, Variant::DigitProduct(dp))
    }

    // ---- combinators -------------------------------------------------------

    /// Weighted sum `Σ w_i μ_i`.
    pub fn mixture(components: &[Measure], weights: &[f64]) -> Result<Self> {
        if components.len() != weights.len() {
            return Err(Error::InvalidArgument(format!(
                "{} components but {} weights",
                components.len(),
                weights.len()
            )));
        }
        let d = components.first().map(|c| c.ambient_dim).unwrap_or(1);
        if let Some(c) = components.iter().find(|c| c.ambient_dim != d) {
            return Err(Error::DimensionMismatch { expected: d, found: c.ambient_dim });
        }
        Self::new(d, Variant::Mixture { components: components.to_vec(), weights: weights.to_vec() })
    }

    /// Push-forward under `x ↦ a x + b`, optionally reduced modulo one.
    pub fn affine_image(&self, scale: Scale, offset: Vec<f64>, mod1: bool) -> Result<Self> {
        Self::new(
            self.ambient_dim,
            Variant::AffineImage { inner: Box::new(self.clone()), scale, offset, mod1 },
        )
    }

    /// One-dimensional convenience for [`Measure::affine_image`].
    pub fn scaled(&self, a: f64, b: f64, mod1: bool) -> Result<Self> {
        self.affine_image(Scale::Scalar(a), vec![b; self.ambient_dim], mod1)
    }

    pub fn translate(&self, t: f64) -> Result<Self> {
        self.scaled(1.0, t, false)
    }

    pub fn convolve(&self, other: &Measure) -> Result<Self> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        Self::new(self.ambient_dim, Variant::Convolution { factors: vec![self.clone(), other.clone()] })
    }

    /// The measure `f dμ` for the bump `f` of `window`. Not renormalized.
    pub fn windowed(&self, window: Window) -> Result<Self> {
        let m = Self::new(1, Variant::Windowed { inner: Box::new(self.clone()), window })?;
        if !(m.mass() > 0.0) {
            return Err(Error::ZeroMeasure);
        }
        Ok(m)
    }

    // ---- queries -----------------------------------------------------------

    /// Total mass, equal to the transform at the origin.
    pub fn mass(&self) -> f64 {
        match &self.variant {
            Variant::Atomic { atoms } => atoms.iter().map(|a| a.weight).sum(),
            Variant::UniformOnIntervals { .. }
            | Variant::TrigDensity { .. }
            | Variant::SelfSimilarDigit { .. }
            | Variant::DigitProduct(_) => 1.0,
            Variant::Mixture { components, weights } => {
                components.iter().zip(weights).map(|(c, w)| w * c.mass()).sum()
            }
            Variant::AffineImage { inner, .. } => inner.mass(),
            Variant::Convolution { factors } => factors.iter().map(Measure::mass).product(),
            Variant::Windowed { inner, window } => crate::fourier::window::windowed_transform(inner, window, 0.0)
                .map(|z| z.re)
                .expect("windowability is checked at construction"),
        }
    }

    /// Whether the measure has an atomic part.
    pub fn has_atoms(&self) -> bool {
        match &self.variant {
            Variant::Atomic { .. } => true,
            Variant::UniformOnIntervals { .. }
            | Variant::TrigDensity { .. }
            | Variant::SelfSimilarDigit { .. }
            | Variant::DigitProduct(_) => false,
            Variant::Mixture { components, .. } => components.iter().any(Measure::has_atoms),
            Variant::AffineImage { inner, .. } => inner.has_atoms(),
            Variant::Convolution { factors } => factors.iter().all(Measure::has_atoms),
            Variant::Windowed { inner, window } => match inner.variant() {
                Variant::Atomic { atoms } => atoms.iter().any(|a| window.value(a.position[0]) > 0.0),
                _ => inner.has_atoms(),
            },
        }
    }

    /// Whether a mod-1 affine image occurs anywhere in the tree.
    pub fn contains_mod1(&self) -> bool {
        match &self.variant {
            Variant::AffineImage { inner, mod1, .. } => *mod1 || inner.contains_mod1(),
            Variant::Mixture { components, .. } => components.iter().any(Measure::contains_mod1),
            Variant::Convolution { factors } => factors.iter().any(Measure::contains_mod1),
            Variant::Windowed { inner, .. } => inner.contains_mod1(),
            _ => false,
        }
    }

    /// Closed interval containing the support, for one-dimensional measures.
    ///
    /// Exact for leaves; for mod-1 images of digit products and atoms it is
    /// exact as well, otherwise `[0, 1]` is reported for mod-1 images.
    pub fn support_bounds(&self) -> (f64, f64) {
        match &self.variant {
            Variant::Atomic { atoms } => atoms.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), a| {
                (lo.min(a.position[0]), hi.max(a.position[0]))
            }),
            Variant::UniformOnIntervals { intervals } => intervals
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), iv| (lo.min(iv.a), hi.max(iv.b))),
            Variant::TrigDensity { .. } => (0.0, 1.0),
            Variant::SelfSimilarDigit { base, allowed_digits } => {
                let b = *base as f64;
                let min = *allowed_digits.iter().min().unwrap() as f64;
                let max = *allowed_digits.iter().max().unwrap() as f64;
                (min / (b - 1.0), max / (b - 1.0))
            }
            Variant::DigitProduct(dp) => dp.support_bounds(),
            Variant::Mixture { components, .. } => components
                .iter()
                .map(Measure::support_bounds)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| (lo.min(a), hi.max(b))),
            Variant::AffineImage { inner, scale, offset, mod1 } => {
                let a = match scale {
                    Scale::Scalar(a) => *a,
                    Scale::Matrix(m) => m[0][0],
                };
                let b = offset[0];
                if *mod1 {
                    return mod1_support(inner, a, b);
                }
                let (lo, hi) = inner.support_bounds();
                let (p, q) = (a * lo + b, a * hi + b);
                (p.min(q), p.max(q))
            }
            Variant::Convolution { factors } => factors
                .iter()
                .map(Measure::support_bounds)
                .fold((0.0, 0.0), |(lo, hi), (a, b)| (lo + a, hi + b)),
            Variant::Windowed { inner, window } => {
                let (lo, hi) = inner.support_bounds();
                (lo.max(window.lo()), hi.min(window.hi()))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measures always serialize")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

fn mod1_support(inner: &Measure, a: f64, b: f64) -> (f64, f64) {
    match inner.variant() {
        Variant::Atomic { atoms } => atoms.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), at| {
            let y = (a * at.position[0] + b).rem_euclid(1.0);
            (lo.min(y), hi.max(y))
        }),
        Variant::DigitProduct(dp) if b == 0.0 => {
            match dp.digit_shift_for_scale(a).and_then(|l| dp.shift_digits(l)) {
                Some(shifted) => shifted.support_bounds(),
                None => (0.0, 1.0),
            }
        }
        _ => (0.0, 1.0),
    }
}

pub(crate) fn determinant(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masses() {
        assert_eq!(Measure::dirac(0.5).unwrap().mass(), 1.0);
        let two_lambda = Measure::mixture(&[Measure::lebesgue(), Measure::lebesgue()], &[1.0, 1.0]).unwrap();
        assert_eq!(two_lambda.mass(), 2.0);
        let dp = DigitProduct::new(2, 4, vec![DigitBlock::new(0, 2, "00")]).unwrap();
        assert_eq!(Measure::digit_product(dp).unwrap().mass(), 1.0);
    }

    #[test]
    fn rejects_malformed_measures() {
        assert!(Measure::atomic_1d(&[]).is_err());
        assert!(Measure::atomic_1d(&[(0.5, -1.0)]).is_err());
        assert!(Measure::uniform_on_intervals(&[(0.0, 0.5), (0.4, 0.9)]).is_err());
        assert!(Measure::uniform_on_intervals(&[(0.5, 0.5)]).is_err());
        assert!(Measure::trig_density(&[(0.6, 2), (0.6, 4)]).is_err());
        assert!(Measure::trig_density(&[(0.5, 0)]).is_err());
        assert!(Measure::self_similar_digit(3, &[0, 3]).is_err());
        assert!(Measure::self_similar_digit(3, &[]).is_err());
        assert!(Measure::lebesgue().scaled(0.0, 0.0, false).is_err());
        assert!(Measure::lebesgue().scaled(2.5, 0.0, true).is_err());
        assert!(Measure::lebesgue().translate(0.5).unwrap().scaled(2.0, 0.0, true).is_err());
        let m2 = Measure::atomic(vec![Atom { position: vec![0.1, 0.2], weight: 1.0 }]).unwrap();
        assert!(matches!(
            Measure::mixture(&[m2.clone(), Measure::lebesgue()], &[1.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(m2.convolve(&Measure::lebesgue()).is_err());
        let singular = Scale::Matrix(vec![vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(m2.affine_image(singular, vec![0.0, 0.0], false), Err(Error::SingularScale));
    }

    #[test]
    fn trig_density_accepts_boundary_amplitude_sum() {
        assert!(Measure::trig_density(&[(0.5, 2), (-0.5, 8)]).is_ok());
    }

    #[test]
    fn windowed_disjoint_from_support_is_zero_measure() {
        let m = Measure::uniform_on_intervals(&[(0.0, 0.2)]).unwrap();
        let w = Window::new(0.8, 0.1, 2).unwrap();
        assert_eq!(m.windowed(w), Err(Error::ZeroMeasure));
    }

    #[test]
    fn support_bounds_of_leaves_and_images() {
        assert_eq!(Measure::self_similar_digit(3, &[0, 2]).unwrap().support_bounds(), (0.0, 1.0));
        let m = Measure::uniform_on_intervals(&[(0.25, 0.5)]).unwrap().scaled(2.0, 0.1, false).unwrap();
        assert_eq!(m.support_bounds(), (0.6, 1.1));
        let atoms = Measure::atomic_1d(&[(0.3, 1.0), (0.8, 1.0)]).unwrap().scaled(2.0, 0.0, true).unwrap();
        let (lo, hi) = atoms.support_bounds();
        assert!((lo - 0.6).abs() < 1e-15 && (hi - 0.6).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip_preserves_structure() {
        let dp = DigitProduct::new(2, 6, vec![DigitBlock::new(1, 2, "00")]).unwrap();
        let m = Measure::mixture(
            &[
                Measure::digit_product(dp).unwrap().scaled(4.0, 0.0, true).unwrap(),
                Measure::trig_density(&[(0.25, 4)]).unwrap().windowed(Window::new(0.5, 0.3, 2).unwrap()).unwrap(),
                Measure::atomic_1d(&[(0.2, 0.5)]).unwrap().convolve(&Measure::lebesgue()).unwrap(),
            ],
            &[0.2, 0.3, 0.5],
        )
        .unwrap();
        let s = m.to_json();
        assert!(s.contains("\"ambient_dim\":1"));
        assert!(s.contains("\"kind\":\"DigitProduct\""));
        assert!(s.contains("\"forbidden_pattern\":\"00\""));
        assert_eq!(Measure::from_json(&s).unwrap(), m);
    }

    #[test]
    fn json_validation_rejects_bad_input() {
        let bad = r#"{"ambient_dim":1,"variant":{"kind":"TrigDensity","terms":[{"amplitude":2.0,"frequency":3}]}}"#;
        assert!(Measure::from_json(bad).is_err());
    }
}
