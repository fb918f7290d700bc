//! A finite model of the polar operator between measures and sets.
//!
//! Pseudo-measures `x` and pseudo-sets `y` are paired by a nonnegative matrix
//! standing for `μ(E)`; the polar of a family on one side is everything on the
//! other side that pairs to zero with all of it.

use crate::error::{Error, Result};
use crate::measure::{Measure, Variant};
use bitvec::prelude::*;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncidenceModel {
    pub nx: usize,
    pub ny: usize,
    pub pairing: Vec<Vec<f64>>,
}

impl IncidenceModel {
    pub fn new(pairing: Vec<Vec<f64>>) -> Result<Self> {
        let nx = pairing.len();
        let ny = pairing.first().map_or(0, Vec::len);
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidArgument("incidence model needs at least one row and column".into()));
        }
        if pairing.iter().any(|r| r.len() != ny) {
            return Err(Error::InvalidArgument("pairing rows have different lengths".into()));
        }
        if pairing.iter().flatten().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidArgument("pairing entries must be finite and nonnegative".into()));
        }
        Ok(Self { nx, ny, pairing })
    }

    /// Each entry is zero with probability `zero_prob`, else uniform in `(0, 1]`.
    pub fn random<R: Rng>(nx: usize, ny: usize, zero_prob: f64, rng: &mut R) -> Self {
        let pairing = (0..nx)
            .map(|_| {
                (0..ny)
                    .map(|_| if rng.random::<f64>() < zero_prob { 0.0 } else { 1.0 - rng.random::<f64>() })
                    .collect()
            })
            .collect();
        Self { nx, ny, pairing }
    }

    fn side_len(&self, side: Side) -> usize {
        match side {
            Side::Measures => self.nx,
            Side::Sets => self.ny,
        }
    }

    fn pair(&self, side: Side, member: usize, other: usize) -> f64 {
        match side {
            Side::Measures => self.pairing[member][other],
            Side::Sets => self.pairing[other][member],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Measures,
    Sets,
}

impl Side {
    pub fn opposite(self) -> Self {
        match self {
            Side::Measures => Side::Sets,
            Side::Sets => Side::Measures,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetPair {
    pub side: Side,
    pub members: BitVec,
}

impl SubsetPair {
    pub fn empty(side: Side, len: usize) -> Self {
        Self { side, members: bitvec![0; len] }
    }

    pub fn full(side: Side, len: usize) -> Self {
        Self { side, members: bitvec![1; len] }
    }

    pub fn from_indices(side: Side, len: usize, indices: &[usize]) -> Self {
        let mut s = Self::empty(side, len);
        for &i in indices {
            s.members.set(i, true);
        }
        s
    }

    pub fn random<R: Rng>(side: Side, len: usize, rng: &mut R) -> Self {
        let p = rng.random::<f64>();
        let mut s = Self::empty(side, len);
        for i in 0..len {
            s.members.set(i, rng.random::<f64>() < p);
        }
        s
    }

    pub fn indices(&self) -> Vec<usize> {
        self.members.iter_ones().collect()
    }

    pub fn is_subset(&self, other: &SubsetPair) -> bool {
        self.side == other.side && self.members.iter_ones().all(|i| other.members[i])
    }

    pub fn union(&self, other: &SubsetPair) -> SubsetPair {
        SubsetPair { side: self.side, members: self.members.clone() | other.members.clone() }
    }

    pub fn intersection(&self, other: &SubsetPair) -> SubsetPair {
        SubsetPair { side: self.side, members: self.members.clone() & other.members.clone() }
    }
}

/// Everything on the opposite side that pairs to zero with every member of `d`.
pub fn perp(model: &IncidenceModel, d: &SubsetPair) -> SubsetPair {
    let other = d.side.opposite();
    let mut out = SubsetPair::empty(other, model.side_len(other));
    for j in 0..model.side_len(other) {
        let annihilated = d.members.iter_ones().all(|i| model.pair(d.side, i, j) == 0.0);
        out.members.set(j, annihilated);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerpReport {
    pub checks: usize,
    pub violations: usize,
    /// Description of the first failing check, if any.
    pub first_counterexample: Option<String>,
}

const FAMILY_SIZE: usize = 3;

/// Checks, on `trials` random draws of subsets and families:
/// (i) `D ⊆ D⊥⊥`; (ii) `D1 ⊆ D2 ⇒ D2⊥ ⊆ D1⊥`; (iii) `D⊥⊥⊥ = D⊥`;
/// (iv) `∪ Dα⊥ ⊆ (∩ Dα)⊥`; (v) `∩ Dα⊥ = (∪ Dα)⊥`.
pub fn check_perp_properties<R: Rng>(model: &IncidenceModel, trials: usize, rng: &mut R) -> Result<PerpReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let mut report = PerpReport { checks: 0, violations: 0, first_counterexample: None };
    let mut record = |ok: bool, what: &dyn Fn() -> String| {
        report.checks += 1;
        if !ok {
            report.violations += 1;
            if report.first_counterexample.is_none() {
                report.first_counterexample = Some(what());
            }
        }
    };
    for _ in 0..trials {
        let side = if rng.random::<bool>() { Side::Measures } else { Side::Sets };
        let len = model.side_len(side);
        let d = SubsetPair::random(side, len, rng);
        let pd = perp(model, &d);
        let ppd = perp(model, &pd);
        record(d.is_subset(&ppd), &|| format!("(i) fails for {:?} {:?}", side, d.indices()));

        let bigger = d.union(&SubsetPair::random(side, len, rng));
        record(perp(model, &bigger).is_subset(&pd), &|| {
            format!("(ii) fails for {:?} {:?} within {:?}", side, d.indices(), bigger.indices())
        });

        record(perp(model, &ppd) == pd, &|| format!("(iii) fails for {:?} {:?}", side, d.indices()));

        let family: Vec<SubsetPair> = (0..FAMILY_SIZE).map(|_| SubsetPair::random(side, len, rng)).collect();
        let perps: Vec<SubsetPair> = family.iter().map(|f| perp(model, f)).collect();
        let other = side.opposite();
        let other_len = model.side_len(other);
        let union_of_perps = perps.iter().fold(SubsetPair::empty(other, other_len), |a, b| a.union(b));
        let inter_of_perps = perps.iter().fold(SubsetPair::full(other, other_len), |a, b| a.intersection(b));
        let inter = family.iter().fold(SubsetPair::full(side, len), |a, b| a.intersection(b));
        let union = family.iter().fold(SubsetPair::empty(side, len), |a, b| a.union(b));
        let describe = || family.iter().map(|f| format!("{:?}", f.indices())).collect::<Vec<_>>().join(", ");
        record(union_of_perps.is_subset(&perp(model, &inter)), &|| format!("(iv) fails for family {}", describe()));
        record(inter_of_perps == perp(model, &union), &|| format!("(v) fails for family {}", describe()));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiconvexWeights {
    pub weights: Vec<f64>,
    /// `Σ p_k C_k`, the transform-bound constant of the mixture.
    pub mixed_constant: f64,
}

/// Neumaier summation.
fn compensated_sum(xs: &[f64]) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for &x in xs {
        let t = sum + x;
        carry += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + carry
}

/// Mixing weights `p_k ∝ 1 / (2^k C_k)`, `k = 1, 2, ...`.
pub fn quasiconvex_weights(constants: &[f64]) -> Result<QuasiconvexWeights> {
    if constants.is_empty() {
        return Err(Error::InvalidArgument("at least one constant is required".into()));
    }
    if let Some(c) = constants.iter().find(|c| !(**c >= 1.0) || !c.is_finite()) {
        return Err(Error::InvalidArgument(format!("constants must be finite and at least 1, got {c}")));
    }
    let raw: Vec<f64> = constants.iter().enumerate().map(|(i, c)| 2f64.powi(-(i as i32 + 1)) / c).collect();
    let total = compensated_sum(&raw);
    let weights: Vec<f64> = raw.iter().map(|a| a / total).collect();
    let mixed_constant = weights.iter().zip(constants).map(|(p, c)| p * c).sum();
    Ok(QuasiconvexWeights { weights, mixed_constant })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicDecomposition {
    /// Atoms of `μ` on the common support set `E`.
    pub continuous_part: Vec<(f64, f64)>,
    /// Atoms of `μ` off `E`.
    pub singular_part: Vec<(f64, f64)>,
    /// `E`: support points of `μ` charged by some family member.
    pub support_set: Vec<f64>,
}

fn atoms_of(m: &Measure) -> Result<Vec<(f64, f64)>> {
    match m.variant() {
        Variant::Atomic { atoms } if m.ambient_dim() == 1 => Ok(atoms.iter().map(|a| (a.position[0], a.weight)).collect()),
        _ => Err(Error::InvalidArgument("decomposition needs one-dimensional atomic measures".into())),
    }
}

/// Splits `μ` into the part carried by the family's supports and the rest.
pub fn decompose_atomic(mu: &Measure, family: &[Measure]) -> Result<AtomicDecomposition> {
    let atoms = atoms_of(mu)?;
    let family_points: Vec<f64> = family
        .iter()
        .map(atoms_of)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .filter(|a| a.1 > 0.0)
        .map(|a| a.0)
        .collect();
    let (continuous_part, singular_part): (Vec<_>, Vec<_>) =
        atoms.iter().copied().partition(|(x, _)| family_points.contains(x));
    let mut support_set: Vec<f64> = continuous_part.iter().map(|a| a.0).collect();
    support_set.sort_by(f64::total_cmp);
    support_set.dedup();
    Ok(AtomicDecomposition { continuous_part, singular_part, support_set })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_perp(model: &IncidenceModel, d: &SubsetPair) -> Vec<usize> {
        let mut out = vec![];
        match d.side {
            Side::Measures => {
                for y in 0..model.ny {
                    let mut ok = true;
                    for x in d.indices() {
                        if model.pairing[x][y] != 0.0 {
                            ok = false;
                        }
                    }
                    if ok {
                        out.push(y);
                    }
                }
            }
            Side::Sets => {
                for x in 0..model.nx {
                    if d.indices().iter().all(|&y| model.pairing[x][y] == 0.0) {
                        out.push(x);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn perp_of_empty_is_full() {
        let m = IncidenceModel::new(vec![vec![1.0, 0.0], vec![0.5, 2.0], vec![0.0, 0.0]]).unwrap();
        let p = perp(&m, &SubsetPair::empty(Side::Measures, 3));
        assert_eq!(p, SubsetPair::full(Side::Sets, 2));
        let ones = IncidenceModel::new(vec![vec![1.0; 4]; 4]).unwrap();
        assert_eq!(perp(&ones, &SubsetPair::full(Side::Measures, 4)).indices(), Vec::<usize>::new());
    }

    #[test]
    fn perp_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let m = IncidenceModel::random(6, 6, 0.5, &mut rng);
            for side in [Side::Measures, Side::Sets] {
                let d = SubsetPair::random(side, 6, &mut rng);
                assert_eq!(perp(&m, &d).indices(), brute_perp(&m, &d));
            }
        }
    }

    #[test]
    fn zero_model_satisfies_everything() {
        let m = IncidenceModel::new(vec![vec![0.0]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = check_perp_properties(&m, 50, &mut rng).unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.checks, 250);
    }

    #[test]
    fn weights_examples() {
        assert_eq!(quasiconvex_weights(&[1.0]).unwrap().weights, vec![1.0]);
        let w = quasiconvex_weights(&[1.0, 1.0]).unwrap().weights;
        assert!((w[0] - 2.0 / 3.0).abs() < 1e-15 && (w[1] - 1.0 / 3.0).abs() < 1e-15);
        let q = quasiconvex_weights(&[1.0, 2.0, 4.0]).unwrap();
        let a = [0.5, 0.125, 1.0 / 32.0];
        let total: f64 = a.iter().sum();
        for (p, ak) in q.weights.iter().zip(a) {
            assert!((p - ak / total).abs() < 1e-15);
        }
        assert!((q.mixed_constant - (0.5 + 0.25 + 0.125) / total).abs() < 1e-14);
        assert!(quasiconvex_weights(&[0.5]).is_err());
    }

    #[test]
    fn decomposition_example() {
        let mu = Measure::atomic_1d(&[(0.1, 0.2), (0.5, 0.3), (0.9, 0.5)]).unwrap();
        let fam = [Measure::dirac(0.1).unwrap(), Measure::dirac(0.5).unwrap()];
        let d = decompose_atomic(&mu, &fam).unwrap();
        assert_eq!(d.support_set, vec![0.1, 0.5]);
        assert_eq!(d.singular_part, vec![(0.9, 0.5)]);
        let none = decompose_atomic(&mu, &[Measure::dirac(0.7).unwrap()]).unwrap();
        assert!(none.continuous_part.is_empty());
        assert!(decompose_atomic(&Measure::lebesgue(), &fam).is_err());
    }
}
