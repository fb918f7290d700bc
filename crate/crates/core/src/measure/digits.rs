use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Digits `offset+1 ..= offset+length` of the base-`b` expansion must not
/// spell `forbidden_pattern`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitBlock {
    pub offset: u32,
    pub length: u32,
    pub forbidden_pattern: String,
}

impl DigitBlock {
    pub fn new(offset: u32, length: u32, forbidden_pattern: &str) -> Self {
        Self { offset, length, forbidden_pattern: forbidden_pattern.to_string() }
    }

    /// The all-zeros constraint used by the digit-restricted sets.
    pub fn no_zero_run(offset: u32, length: u32) -> Self {
        Self::new(offset, length, &"0".repeat(length as usize))
    }

    pub fn pattern_digits(&self) -> Vec<u32> {
        self.forbidden_pattern.chars().map(|c| c.to_digit(10).unwrap_or(u32::MAX)).collect()
    }

    fn end(&self) -> u32 {
        self.offset + self.length
    }
}

/// Normalized Lebesgue measure on the depth-`depth` cylinders whose digits
/// avoid every block's forbidden pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DigitProduct {
    pub base: u32,
    pub depth: u32,
    pub blocks: Vec<DigitBlock>,
}

impl DigitProduct {
    pub const MAX_DEPTH: u32 = 60;

    pub fn new(base: u32, depth: u32, mut blocks: Vec<DigitBlock>) -> Result<Self> {
        blocks.sort_by_key(|b| b.offset);
        let dp = Self { base, depth, blocks };
        dp.validate()?;
        Ok(dp)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidMeasure(msg));
        if !(2..=10).contains(&self.base) {
            return bad(format!("digit-product base must lie in 2..=10, got {}", self.base));
        }
        if self.depth == 0 || self.depth > Self::MAX_DEPTH {
            return bad(format!("digit-product depth must lie in 1..={}, got {}", Self::MAX_DEPTH, self.depth));
        }
        for block in &self.blocks {
            if block.length == 0 {
                return bad("digit block length must be positive".into());
            }
            if block.end() > self.depth {
                return bad(format!(
                    "block at offset {} of length {} exceeds depth {}",
                    block.offset, block.length, self.depth
                ));
            }
            let digits = block.pattern_digits();
            if digits.len() != block.length as usize || digits.iter().any(|&d| d >= self.base) {
                return bad(format!(
                    "forbidden pattern {:?} must be {} base-{} digits",
                    block.forbidden_pattern, block.length, self.base
                ));
            }
        }
        let mut sorted: Vec<&DigitBlock> = self.blocks.iter().collect();
        sorted.sort_by_key(|b| b.offset);
        if sorted.windows(2).any(|w| w[1].offset < w[0].end()) {
            return bad("digit blocks must occupy disjoint digit ranges".into());
        }
        Ok(())
    }

    fn block_at(&self, digit_index: u32) -> Option<&DigitBlock> {
        self.blocks.iter().find(|b| digit_index > b.offset && digit_index <= b.end())
    }

    /// Digit positions (1-based) not covered by any block.
    pub fn free_digits(&self) -> impl Iterator<Item = u32> + '_ {
        (1..=self.depth).filter(move |&i| self.block_at(i).is_none())
    }

    /// Number of allowed depth-`depth` cylinders, if it fits in a `u128`.
    pub fn cylinder_count(&self) -> Option<u128> {
        let b = self.base as u128;
        let mut count: u128 = 1;
        for _ in self.free_digits() {
            count = count.checked_mul(b)?;
        }
        for block in &self.blocks {
            let all = b.checked_pow(block.length)?;
            count = count.checked_mul(all - 1)?;
        }
        Some(count)
    }

    /// Lebesgue measure of the union of allowed cylinders.
    pub fn lebesgue_mass(&self) -> f64 {
        let b = self.base as f64;
        self.blocks.iter().map(|blk| 1.0 - b.powi(-(blk.length as i32))).product()
    }

    pub fn cell_width(&self) -> f64 {
        (self.base as f64).powi(-(self.depth as i32))
    }

    /// Whether the digit string `x_1 .. x_depth` is allowed.
    pub fn is_allowed(&self, digits: &[u32]) -> bool {
        self.blocks.iter().all(|blk| {
            let lo = blk.offset as usize;
            let hi = blk.end() as usize;
            digits[lo..hi] != blk.pattern_digits()[..]
        })
    }

    /// Left endpoints of all allowed cylinders, in increasing order.
    ///
    /// Returns `None` when there are more than `limit` cells in total.
    pub fn allowed_cells(&self, limit: usize) -> Option<Vec<f64>> {
        let total = (self.base as u128).checked_pow(self.depth)?;
        if total > limit as u128 {
            return None;
        }
        let width = self.cell_width();
        let n = self.depth as usize;
        let mut digits = vec![0u32; n];
        let mut out = Vec::new();
        for index in 0..total as u64 {
            let mut rest = index;
            for slot in digits.iter_mut().rev() {
                *slot = (rest % self.base as u64) as u32;
                rest /= self.base as u64;
            }
            if self.is_allowed(&digits) {
                out.push(index as f64 * width);
            }
        }
        Some(out)
    }

    fn extreme_string(&self, smallest: bool) -> Vec<u32> {
        let top = self.base - 1;
        let fill = if smallest { 0 } else { top };
        let mut digits = vec![fill; self.depth as usize];
        for blk in &self.blocks {
            let pattern = blk.pattern_digits();
            if pattern.iter().all(|&d| d == fill) {
                // Next string in the requested direction within the block.
                let last = blk.end() as usize - 1;
                digits[last] = if smallest { 1 } else { top - 1 };
            }
        }
        digits
    }

    fn string_value(&self, digits: &[u32]) -> f64 {
        let b = self.base as f64;
        digits.iter().enumerate().map(|(i, &d)| d as f64 * b.powi(-(i as i32 + 1))).sum()
    }

    /// `[inf supp, sup supp]`.
    pub fn support_bounds(&self) -> (f64, f64) {
        let lo = self.string_value(&self.extreme_string(true));
        let hi = self.string_value(&self.extreme_string(false)) + self.cell_width();
        (lo, hi)
    }

    /// `l` such that `a = base^l`, if any.
    pub fn digit_shift_for_scale(&self, a: f64) -> Option<u32> {
        let b = self.base as f64;
        (0..=self.depth).find(|&l| b.powi(l as i32) == a)
    }

    /// The image under `x ↦ base^l x mod 1`, when no block straddles digit `l`.
    ///
    /// Blocks entirely among the first `l` digits are dropped; the rest move
    /// down by `l` positions. The product structure makes the image again a
    /// digit-product measure.
    pub fn shift_digits(&self, l: u32) -> Option<DigitProduct> {
        if l >= self.depth {
            return None;
        }
        if self.blocks.iter().any(|b| b.offset < l && b.end() > l) {
            return None;
        }
        let blocks = self
            .blocks
            .iter()
            .filter(|b| b.offset >= l)
            .map(|b| DigitBlock { offset: b.offset - l, ..b.clone() })
            .collect();
        DigitProduct::new(self.base, self.depth - l, blocks).ok()
    }
}
