//! Deterministic generators of probe frequencies.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Fractional part of the golden ratio; offsets samples inside dyadic
/// windows away from integers and dyadic rationals.
const SAMPLE_PHASE: f64 = 0.618_033_988_749_894_8;

/// Sample offset inside window `e`. It rotates by `sqrt 2` per window, so
/// the samples of window `e + 1` are not the doubles of those of window `e`;
/// doubling would carry near-resonances of atomic transforms from one
/// window into the next.
fn window_phase(e: i32) -> f64 {
    (SAMPLE_PHASE + e as f64 * std::f64::consts::SQRT_2).rem_euclid(1.0)
}

fn default_base() -> u32 {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FrequencySchedule {
    /// Integers `start ..= end`.
    IntegerRange { start: u64, end: u64 },
    /// `samples_per_window` log-spaced points in each `[2^e, 2^(e+1))`,
    /// `min_exp <= e < max_exp`.
    DyadicWindows { min_exp: i32, max_exp: i32, samples_per_window: usize },
    /// `base^e * j` for each listed exponent `e` and `1 <= j <= max_multiplier`.
    Lacunary {
        #[serde(default = "default_base")]
        base: u32,
        exponents: Vec<u32>,
        max_multiplier: u64,
    },
    Explicit { frequencies: Vec<f64> },
    /// Union of several schedules.
    Union { parts: Vec<FrequencySchedule> },
}

impl FrequencySchedule {
    pub fn integer_range(start: u64, end: u64) -> Self {
        Self::IntegerRange { start, end }
    }

    pub fn dyadic(min_exp: i32, max_exp: i32, samples_per_window: usize) -> Self {
        Self::DyadicWindows { min_exp, max_exp, samples_per_window }
    }

    /// Probes `2^(k^2)` for `k` in `ks`.
    pub fn square_lacunary(ks: std::ops::RangeInclusive<u32>) -> Self {
        Self::Lacunary { base: 2, exponents: ks.map(|k| k * k).collect(), max_multiplier: 1 }
    }

    pub fn powers(base: u32, ks: std::ops::RangeInclusive<u32>) -> Self {
        Self::Lacunary { base, exponents: ks.collect(), max_multiplier: 1 }
    }

    pub fn union(parts: Vec<FrequencySchedule>) -> Self {
        Self::Union { parts }
    }

    /// All frequencies, nonzero and sorted by modulus (ties broken by sign),
    /// without duplicates.
    pub fn frequencies(&self) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        self.collect(&mut out)?;
        if out.is_empty() {
            return Err(Error::InvalidArgument("schedule generates no frequencies".into()));
        }
        if let Some(bad) = out.iter().find(|x| **x == 0.0 || !x.is_finite()) {
            return Err(Error::InvalidArgument(format!("schedule frequency {bad} is zero or not finite")));
        }
        out.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
        out.dedup();
        Ok(out)
    }

    fn collect(&self, out: &mut Vec<f64>) -> Result<()> {
        match self {
            Self::IntegerRange { start, end } => {
                if *start == 0 || start > end {
                    return Err(Error::InvalidArgument(format!("integer range {start}..={end} must start at 1 or later")));
                }
                out.extend((*start..=*end).map(|j| j as f64));
            }
            Self::DyadicWindows { min_exp, max_exp, samples_per_window } => {
                if max_exp <= min_exp || *samples_per_window == 0 {
                    return Err(Error::InvalidArgument(format!(
                        "dyadic windows need min_exp < max_exp and samples > 0, got {min_exp}..{max_exp} x {samples_per_window}"
                    )));
                }
                let n = *samples_per_window as f64;
                for e in *min_exp..*max_exp {
                    let phase = window_phase(e);
                    for i in 0..*samples_per_window {
                        out.push(2f64.powf(e as f64 + (i as f64 + phase) / n));
                    }
                }
            }
            Self::Lacunary { base, exponents, max_multiplier } => {
                if *base < 2 || *max_multiplier == 0 || exponents.is_empty() {
                    return Err(Error::InvalidArgument("lacunary schedule needs base >= 2, exponents and multipliers".into()));
                }
                for &e in exponents {
                    let scale = (*base as f64).powi(e as i32);
                    out.extend((1..=*max_multiplier).map(|j| scale * j as f64));
                }
            }
            Self::Explicit { frequencies } => out.extend_from_slice(frequencies),
            Self::Union { parts } => {
                for p in parts {
                    p.collect(out)?;
                }
            }
        }
        Ok(())
    }
}
