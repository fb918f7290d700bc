//! Decay-exponent estimation from sampled transforms.

use crate::error::{Error, Result};
use crate::fourier::ft_vec;
use crate::measure::Measure;
use crate::schedule::FrequencySchedule;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

/// Fewest dyadic windows a schedule must cover.
pub const MIN_WINDOWS: usize = 8;
/// Shortest span, in octaves, between the two ends of an envelope slope.
pub const MIN_SLOPE_SPAN: i32 = 5;

/// A window below this fraction of its neighbours' envelope counts as a dip.
pub const DIP_RATIO: f64 = 0.5;

/// How the per-window data are reduced to one liminf estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProxyRule {
    /// Smallest local exponent among the upper half of the windows.
    TopHalfMinimum,
    /// Smallest log-log slope from the maximum of one upper-half window to
    /// the largest value sampled at least [`MIN_SLOPE_SPAN`] octaves later.
    ///
    /// Unlike the local exponent this ignores the (unknown) constant in
    /// `|μ̂(ξ)| <= C |ξ|^{-s/2}`. Comparing a single window against
    /// everything beyond it keeps non-decaying transforms from showing a
    /// spurious decay when one late window happens to be sampled low.
    /// A window sampled below half of both the upper-half maximum before it
    /// and the maximum after it most likely missed narrow peaks; it is
    /// raised to the smaller of the two before a slope starts there.
    #[default]
    EnvelopeSlope,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayWindow {
    pub exp_lo: i32,
    pub exp_hi: i32,
    pub max_abs: f64,
    /// `-2 log(max_abs) / log(center)`, `+inf` when `max_abs` is zero.
    pub local_exponent: f64,
}

impl DecayWindow {
    pub fn center(&self) -> f64 {
        2f64.powf(0.5 * (self.exp_lo + self.exp_hi) as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub windows: Vec<DecayWindow>,
    pub liminf_proxy: f64,
    pub capped_dim: f64,
    pub rule: ProxyRule,
}

impl DecayReport {
    /// Per-window rows `exp_lo,exp_hi,max_abs,local_exponent`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "exp_lo,exp_hi,max_abs,local_exponent")?;
        for w in &self.windows {
            writeln!(out, "{},{},{},{}", w.exp_lo, w.exp_hi, w.max_abs, w.local_exponent)?;
        }
        Ok(())
    }
}

pub fn decay_exponent(m: &Measure, sched: &FrequencySchedule) -> Result<DecayReport> {
    decay_exponent_with(m, sched, ProxyRule::default())
}

/// Probe directions for `d > 1`: the coordinate axes and the main diagonal.
fn directions(d: usize) -> Vec<Vec<f64>> {
    if d == 1 {
        return vec![vec![1.0]];
    }
    let mut out: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    out.push(vec![1.0 / (d as f64).sqrt(); d]);
    out
}

/// Windows `[2^e, 2^(e+1))` with `e >= 1` that contain schedule frequencies,
/// with the largest `|μ̂|` seen in each. In dimension `d > 1` each `|ξ|` is
/// probed along every direction of [`directions`].
pub fn windowed_maxima(m: &Measure, sched: &FrequencySchedule) -> Result<Vec<DecayWindow>> {
    let freqs = sched.frequencies()?;
    let dirs = directions(m.ambient_dim());
    let moduli: Vec<(f64, f64)> = freqs
        .par_iter()
        .map(|&xi| {
            let mut best: f64 = 0.0;
            for dir in &dirs {
                let v: Vec<f64> = dir.iter().map(|u| u * xi).collect();
                best = best.max(ft_vec(m, &v)?.norm());
            }
            Ok((xi.abs(), best))
        })
        .collect::<Result<_>>()?;
    let mut maxima: BTreeMap<i32, f64> = BTreeMap::new();
    for (r, v) in moduli {
        let e = r.log2().floor() as i32;
        if e < 1 {
            continue;
        }
        let slot = maxima.entry(e).or_insert(0.0);
        *slot = slot.max(v);
    }
    Ok(maxima
        .into_iter()
        .map(|(e, max_abs)| {
            let mut w = DecayWindow { exp_lo: e, exp_hi: e + 1, max_abs, local_exponent: 0.0 };
            w.local_exponent = if max_abs > 0.0 { -2.0 * max_abs.ln() / w.center().ln() } else { f64::INFINITY };
            w
        })
        .collect())
}

pub fn decay_exponent_with(m: &Measure, sched: &FrequencySchedule, rule: ProxyRule) -> Result<DecayReport> {
    let windows = windowed_maxima(m, sched)?;
    if windows.len() < MIN_WINDOWS {
        return Err(Error::ScheduleTooShort { found: windows.len(), required: MIN_WINDOWS });
    }
    let liminf_proxy = liminf_proxy(&windows, rule);
    let d = m.ambient_dim() as f64;
    Ok(DecayReport { windows, liminf_proxy, capped_dim: liminf_proxy.clamp(0.0, d), rule })
}

/// Reduces sorted windows to a single exponent estimate.
pub fn liminf_proxy(windows: &[DecayWindow], rule: ProxyRule) -> f64 {
    let top = &windows[windows.len() / 2..];
    let top_half_minimum = top.iter().map(|w| w.local_exponent).fold(f64::INFINITY, f64::min);
    match rule {
        ProxyRule::TopHalfMinimum => top_half_minimum,
        ProxyRule::EnvelopeSlope => {
            let n = windows.len();
            let h = n / 2;
            // Largest sampled value at or beyond each window.
            let mut tail = vec![0.0; n];
            let mut running: f64 = 0.0;
            for i in (0..n).rev() {
                running = running.max(windows[i].max_abs);
                tail[i] = running;
            }
            let span_needed = MIN_SLOPE_SPAN.min(windows[n - 1].exp_lo - windows[h].exp_lo).max(1);
            let mut best = f64::INFINITY;
            let mut head: f64 = 0.0;
            for i in h..n {
                let after = if i + 1 < n { tail[i + 1] } else { 0.0 };
                let envelope = head.min(after);
                let start = if windows[i].max_abs < DIP_RATIO * envelope { envelope } else { windows[i].max_abs };
                head = head.max(windows[i].max_abs);
                for j in i + 1..n {
                    if windows[j].exp_lo - windows[i].exp_lo < span_needed {
                        continue;
                    }
                    let slope = if tail[j] > 0.0 {
                        2.0 * (start / tail[j]).ln() / (windows[j].center() / windows[i].center()).ln()
                    } else {
                        f64::INFINITY
                    };
                    best = best.min(slope);
                }
            }
            if best.is_finite() || top_half_minimum.is_infinite() {
                best
            } else {
                top_half_minimum
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(e: i32, max_abs: f64) -> DecayWindow {
        let mut w = DecayWindow { exp_lo: e, exp_hi: e + 1, max_abs, local_exponent: 0.0 };
        w.local_exponent = -2.0 * max_abs.ln() / w.center().ln();
        w
    }

    #[test]
    fn power_law_envelope_recovers_exponent() {
        // |μ̂| = 5 |ξ|^{-0.3} has dimension 0.6 regardless of the constant 5.
        let ws: Vec<_> = (1..30).map(|e| window(e, 5.0 * 2f64.powf(-0.3 * (e as f64 + 0.5)))).collect();
        assert!((liminf_proxy(&ws, ProxyRule::EnvelopeSlope) - 0.6).abs() < 1e-12);
        // The local exponent is biased by the constant.
        assert!(liminf_proxy(&ws, ProxyRule::TopHalfMinimum) < 0.6);
    }

    #[test]
    fn plateau_gives_zero_slope() {
        let ws: Vec<_> = (1..20).map(|e| window(e, 0.3)).collect();
        assert_eq!(liminf_proxy(&ws, ProxyRule::EnvelopeSlope), 0.0);
    }

    #[test]
    fn lebesgue_has_full_dimension() {
        let r = decay_exponent(&Measure::lebesgue(), &FrequencySchedule::dyadic(4, 20, 16)).unwrap();
        assert!((r.capped_dim - 1.0).abs() < 0.05);
        assert_eq!(r.windows.len(), 16);
    }

    #[test]
    fn atoms_do_not_decay() {
        let r = decay_exponent(&Measure::dirac(0.5).unwrap(), &FrequencySchedule::dyadic(4, 20, 16)).unwrap();
        assert_eq!(r.capped_dim, 0.0);
    }

    #[test]
    fn short_schedule_rejected() {
        let e = decay_exponent(&Measure::lebesgue(), &FrequencySchedule::dyadic(4, 8, 4)).unwrap_err();
        assert_eq!(e, Error::ScheduleTooShort { found: 4, required: MIN_WINDOWS });
    }

    #[test]
    fn vanishing_transform_gives_infinite_local_exponent() {
        let r = decay_exponent(&Measure::lebesgue(), &FrequencySchedule::integer_range(1, 1000)).unwrap();
        assert!(r.windows.iter().all(|w| w.local_exponent.is_infinite()));
        assert_eq!(r.capped_dim, 1.0);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"local_exponent\":null"));
    }
}
