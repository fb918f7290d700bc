//! Named measures: digit-restricted sets, lacunary trigonometric densities
//! and the middle-third Cantor measure.

use crate::error::{Error, Result};
use crate::measure::{DigitBlock, DigitProduct, Measure};
use serde::{Deserialize, Serialize};

/// How block offsets `l_k` grow with `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OffsetRule {
    /// `l_k = k^exponent`.
    Power { exponent: u32 },
    /// `l_k = values[k - 1]`.
    Explicit { values: Vec<u32> },
}

/// Length of the `k`-th zero-forbidding block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockRule {
    /// Length `k`.
    Index,
    /// Length `ceil(b l_k)`, for a parameter `b` tied to a target exponent `s`
    /// by `(1 - s)/s < b < s/2`.
    Proportional { s: f64, b: f64 },
}

/// The truncated digit-restricted set: `k = n ..= k_max`, with digits
/// `l_k + 1 ..= l_k + len(k)` not all zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DigitScheduleSpec {
    pub offsets: OffsetRule,
    pub block: BlockRule,
    pub n: u32,
    pub k_max: u32,
}

impl DigitScheduleSpec {
    /// Blocks of length `k` at offsets `l_k = k^2`.
    pub fn setex(n: u32, k_max: u32) -> Self {
        Self { offsets: OffsetRule::Power { exponent: 2 }, block: BlockRule::Index, n, k_max }
    }

    /// Blocks of length `ceil(b k^3)` at offsets `l_k = k^3`.
    pub fn setexc(s: f64, b: f64, n: u32, k_max: u32) -> Self {
        Self { offsets: OffsetRule::Power { exponent: 3 }, block: BlockRule::Proportional { s, b }, n, k_max }
    }

    pub fn offset(&self, k: u32) -> Result<u32> {
        match &self.offsets {
            OffsetRule::Power { exponent } => {
                k.checked_pow(*exponent).ok_or_else(|| Error::InvalidArgument(format!("l_{k} overflows")))
            }
            OffsetRule::Explicit { values } => values
                .get(k as usize - 1)
                .copied()
                .ok_or_else(|| Error::InvalidArgument(format!("no offset given for k = {k}"))),
        }
    }

    pub fn block_length(&self, k: u32) -> Result<u32> {
        match self.block {
            BlockRule::Index => Ok(k),
            BlockRule::Proportional { b, .. } => Ok((b * self.offset(k)? as f64).ceil() as u32),
        }
    }

    /// Digit depth `l_K + len(K)` of the truncation.
    pub fn depth(&self) -> Result<u32> {
        Ok(self.offset(self.k_max)? + self.block_length(self.k_max)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.n == 0 || self.k_max < self.n {
            return bad(format!("need 1 <= n <= K, got n = {}, K = {}", self.n, self.k_max));
        }
        if let BlockRule::Proportional { s, b } = self.block {
            if !(s > 3f64.sqrt() - 1.0 && s < 1.0) {
                return bad(format!("s = {s} must lie in (sqrt(3) - 1, 1)"));
            }
            if !((1.0 - s) / s < b && b < s / 2.0) {
                return bad(format!("b = {b} must lie in ((1 - s)/s, s/2) = ({}, {})", (1.0 - s) / s, s / 2.0));
            }
        }
        for k in 1..=self.k_max {
            if self.block_length(k)? == 0 {
                return bad(format!("block {k} has length zero"));
            }
            if k > 1 {
                let (prev, cur) = (self.offset(k - 1)?, self.offset(k)?);
                if cur <= prev {
                    return bad(format!("offsets must increase strictly, l_{} = {prev}, l_{k} = {cur}", k - 1));
                }
                if cur < prev + self.block_length(k - 1)? {
                    return bad(format!("block {} overlaps block {k}", k - 1));
                }
            }
        }
        if self.depth()? > DigitProduct::MAX_DEPTH {
            return bad(format!("depth {} exceeds {}", self.depth()?, DigitProduct::MAX_DEPTH));
        }
        Ok(())
    }

    pub fn digit_product(&self) -> Result<DigitProduct> {
        self.validate()?;
        let blocks = (self.n..=self.k_max)
            .map(|k| Ok(DigitBlock::no_zero_run(self.offset(k)?, self.block_length(k)?)))
            .collect::<Result<Vec<_>>>()?;
        DigitProduct::new(2, self.depth()?, blocks)
    }

    /// Partial sums of `Σ_{k>=n} 2^{(1-s) l_k - s len(k)}` for `k = n ..= k_max`,
    /// the covering bound for the complement of the set. Only meaningful for
    /// [`BlockRule::Proportional`]; uses its `s`.
    pub fn hausdorff_partial_sums(&self) -> Result<Vec<f64>> {
        let s = match self.block {
            BlockRule::Proportional { s, .. } => s,
            BlockRule::Index => return Err(Error::InvalidArgument("covering sums need the proportional rule".into())),
        };
        let mut acc = 0.0;
        (self.n..=self.k_max)
            .map(|k| {
                let l = self.offset(k)? as f64;
                let m = self.block_length(k)? as f64;
                acc += 2f64.powf((1.0 - s) * l - s * m);
                Ok(acc)
            })
            .collect()
    }
}

/// Normalized Lebesgue measure on the truncated digit-restricted set.
pub fn bn_truncated_measure(spec: &DigitScheduleSpec) -> Result<Measure> {
    Measure::digit_product(spec.digit_product()?)
}

/// `1 + sign Σ_{k=1}^{depth} 2^{-k} sin(2 pi 2^{k^2} x)`.
///
/// `depth` is at most 7 so that every frequency is an exact `u64`.
pub fn measex_density(sign: i32, depth: u32) -> Result<Measure> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument(format!("sign must be +1 or -1, got {sign}")));
    }
    if !(1..=7).contains(&depth) {
        return Err(Error::InvalidArgument(format!("depth must lie in 1..=7, got {depth}")));
    }
    let terms: Vec<(f64, u64)> =
        (1..=depth).map(|k| (sign as f64 * 2f64.powi(-(k as i32)), 1u64 << (k * k))).collect();
    Measure::trig_density(&terms)
}

pub const MEASEX_DEFAULT_DEPTH: u32 = 6;

/// The middle-third Cantor measure.
pub fn cantor_measure() -> Measure {
    Measure::self_similar_digit(3, &[0, 2]).expect("base 3 with digits {0, 2} is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::ft;
    use num_complex::Complex64;

    #[test]
    fn single_block_instance() {
        let spec = DigitScheduleSpec {
            offsets: OffsetRule::Explicit { values: vec![1] },
            block: BlockRule::Index,
            n: 1,
            k_max: 1,
        };
        let dp = spec.digit_product().unwrap();
        assert_eq!(dp.depth, 2);
        // cells with second digit 1: [0.25, 0.5) and [0.75, 1)
        assert_eq!(dp.allowed_cells(16).unwrap(), vec![0.25, 0.75]);
        assert_eq!(dp.lebesgue_mass(), 0.5);
    }

    #[test]
    fn setex_depth_and_mass() {
        let spec = DigitScheduleSpec::setex(1, 5);
        assert_eq!(spec.depth().unwrap(), 30);
        let dp = spec.digit_product().unwrap();
        let lower: f64 = 1.0 - (1..=5).map(|k| 2f64.powi(-k)).sum::<f64>();
        assert!(dp.lebesgue_mass() >= lower);
    }

    #[test]
    fn setexc_parameters() {
        assert!(DigitScheduleSpec::setexc(0.5, 0.3, 1, 3).validate().is_err());
        assert!(DigitScheduleSpec::setexc(0.9, 0.05, 1, 3).validate().is_err());
        let spec = DigitScheduleSpec::setexc(0.9, 0.3, 1, 3);
        spec.validate().unwrap();
        assert_eq!(spec.block_length(2).unwrap(), 3);
        assert_eq!(spec.depth().unwrap(), 36);
    }

    #[test]
    fn overlapping_offsets_rejected() {
        let spec = DigitScheduleSpec {
            offsets: OffsetRule::Explicit { values: vec![1, 2, 3] },
            block: BlockRule::Index,
            n: 1,
            k_max: 3,
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn covering_sums_are_cauchy() {
        let spec = DigitScheduleSpec::setexc(0.9, 0.3, 1, 40);
        let sums = spec.hausdorff_partial_sums().unwrap();
        let tail = sums[39] - sums[20];
        assert!((0.0..1e-12).contains(&tail));
    }

    #[test]
    fn measex_sign_minus_depth_one() {
        let h = measex_density(-1, 1).unwrap();
        assert_eq!(ft(&h, 2.0).unwrap(), Complex64::new(0.0, 0.25));
        assert_eq!(h.mass(), 1.0);
    }

    #[test]
    fn cantor_at_zero() {
        assert_eq!(ft(&cantor_measure(), 0.0).unwrap(), Complex64::new(1.0, 0.0));
    }
}
