//! Named experiments driven by JSON configs.
//!
//! Each run produces a CSV of data rows and a JSON summary holding the
//! estimates, the bounds checked and their pass/fail flags.

use crate::band::{check_perp_properties, IncidenceModel};
use crate::constructions::{bn_truncated_measure, cantor_measure, measex_density, DigitScheduleSpec, MEASEX_DEFAULT_DEPTH};
use crate::dimension::{
    decay_exponent_with, energy_fourier, energy_spatial, lower_bound_search, matrix_image_experiment,
    stability_experiment, DecayReport, EnergyResult, ProxyRule,
};
use crate::error::Error;
use crate::fourier::{ft, ft_batch, wiener_average, write_samples_csv};
use crate::measure::{Measure, Scale, Variant};
use crate::schedule::FrequencySchedule;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const EXPERIMENTS: &[&str] = &[
    "transform",
    "decay",
    "energy",
    "wiener",
    "lowerbound",
    "stability",
    "matrix-image",
    "setex",
    "setexc",
    "measex",
    "cantor",
    "galois",
];

fn default_output() -> String {
    "out".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<Measure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<FrequencySchedule>,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    /// Path prefix of the artifacts.
    #[serde(default = "default_output")]
    pub output: String,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(experiment: &str) -> Self {
        Self {
            experiment: experiment.into(),
            measure: None,
            schedule: None,
            params: BTreeMap::new(),
            output: default_output(),
            seed: 0,
        }
    }

    pub fn from_json(s: &str) -> Result<Self, RunError> {
        serde_json::from_str(s).map_err(|e| RunError::Config(e.to_string()))
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunError {
    /// Process exit code: 2 for config errors, 3 for non-convergence, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) => 3,
            RunError::Io(_) => 1,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotConverged(_) | Error::QuadratureTolerance { .. } | Error::CutoffTooSmall(_) => {
                RunError::Numerical(e.to_string())
            }
            _ => RunError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

type Res<T> = std::result::Result<T, RunError>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// `"<="` or `">="`.
    pub relation: &'static str,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, relation: "<=", bound, passed: value <= bound }
    }

    fn at_least(name: &str, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, relation: ">=", bound, passed: value >= bound }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub experiment: String,
    /// The statement the experiment checks.
    pub claim: &'static str,
    pub seed: u64,
    #[serde(flatten)]
    pub estimates: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Summary {
    fn new(cfg: &ExperimentConfig, claim: &'static str) -> Self {
        Self {
            experiment: cfg.experiment.clone(),
            claim,
            seed: cfg.seed,
            estimates: BTreeMap::new(),
            checks: Vec::new(),
            passed: true,
        }
    }

    fn set(&mut self, key: &str, value: impl Serialize) {
        self.estimates.insert(key.into(), serde_json::to_value(value).expect("estimates serialize"));
    }

    fn check(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summaries serialize");
        s.push('\n');
        s
    }

    /// 0 when every check passed, 4 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            4
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub csv: String,
    pub summary: Summary,
}

impl Artifacts {
    /// Writes `<prefix>.csv` and `<prefix>.json`; returns their paths.
    pub fn write(&self, prefix: &str) -> Res<(PathBuf, PathBuf)> {
        let csv = PathBuf::from(format!("{prefix}.csv"));
        let json = PathBuf::from(format!("{prefix}.json"));
        if let Some(dir) = Path::new(prefix).parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(&csv, &self.csv)?;
        std::fs::write(&json, self.summary.to_json())?;
        Ok((csv, json))
    }
}

/// Runs the experiment and writes its artifacts under `cfg.output`.
pub fn run(cfg: &ExperimentConfig) -> Res<Summary> {
    let artifacts = execute(cfg)?;
    artifacts.write(&cfg.output)?;
    Ok(artifacts.summary)
}

/// Runs the experiment without touching the file system.
pub fn execute(cfg: &ExperimentConfig) -> Res<Artifacts> {
    match cfg.experiment.as_str() {
        "transform" => transform(cfg),
        "decay" => decay(cfg),
        "energy" => energy(cfg),
        "wiener" => wiener(cfg),
        "lowerbound" => lowerbound(cfg),
        "stability" => stability(cfg),
        "matrix-image" => matrix_image(cfg),
        "setex" => setex(cfg),
        "setexc" => setexc(cfg),
        "measex" => measex(cfg),
        "cantor" => cantor(cfg),
        "galois" => galois(cfg),
        other => Err(RunError::Config(format!("unknown experiment {other:?}; known: {}", EXPERIMENTS.join(", ")))),
    }
}

/// Typed access to `params`, rejecting keys an experiment does not read.
struct Params<'a>(&'a BTreeMap<String, Value>);

impl<'a> Params<'a> {
    fn new(cfg: &'a ExperimentConfig, known: &[&str]) -> Res<Self> {
        if let Some(k) = cfg.params.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(RunError::Config(format!(
                "unknown parameter {k:?} for {}; accepted: [{}]",
                cfg.experiment,
                known.join(", ")
            )));
        }
        Ok(Self(&cfg.params))
    }

    fn get<T: DeserializeOwned>(&self, key: &str) -> Res<Option<T>> {
        self.0
            .get(key)
            .map(|v| serde_json::from_value(v.clone()).map_err(|e| RunError::Config(format!("parameter {key:?}: {e}"))))
            .transpose()
    }

    fn or<T: DeserializeOwned>(&self, key: &str, default: T) -> Res<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn required<T: DeserializeOwned>(&self, key: &str) -> Res<T> {
        self.get(key)?.ok_or_else(|| RunError::Config(format!("missing parameter {key:?}")))
    }
}

fn require_measure(cfg: &ExperimentConfig) -> Res<&Measure> {
    cfg.measure.as_ref().ok_or_else(|| RunError::Config(format!("{} needs a measure", cfg.experiment)))
}

/// 64 samples in each dyadic window `2^4 ..= 2^26`, plus the probes `2^(k^2)`, `k <= 5`.
pub fn default_schedule() -> FrequencySchedule {
    FrequencySchedule::union(vec![FrequencySchedule::dyadic(4, 26, 64), FrequencySchedule::square_lacunary(1..=5)])
}

/// Dyadic windows `2^4 ..= 2^54` plus the probes `3^k`, `k <= 33`.
pub fn cantor_schedule() -> FrequencySchedule {
    FrequencySchedule::union(vec![FrequencySchedule::dyadic(4, 54, 8), FrequencySchedule::powers(3, 1..=33)])
}

fn schedule_or(cfg: &ExperimentConfig, default: fn() -> FrequencySchedule) -> FrequencySchedule {
    cfg.schedule.clone().unwrap_or_else(default)
}

fn csv_of(f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Res<String> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Per-window rows of several reports, tagged by `series`.
fn series_csv(reports: &[(&str, &DecayReport)]) -> String {
    let mut out = String::from("series,exp_lo,exp_hi,max_abs,local_exponent\n");
    for (name, r) in reports {
        for w in &r.windows {
            let _ = writeln!(out, "{name},{},{},{},{}", w.exp_lo, w.exp_hi, w.max_abs, w.local_exponent);
        }
    }
    out
}

fn transform(cfg: &ExperimentConfig) -> Res<Artifacts> {
    Params::new(cfg, &[])?;
    let m = require_measure(cfg)?;
    let sched = cfg.schedule.as_ref().ok_or_else(|| RunError::Config("transform needs a schedule".into()))?;
    let samples = ft_batch(m, sched)?;
    let max_abs = samples.iter().map(|s| s.value.norm()).fold(0.0, f64::max);
    let mut summary = Summary::new(cfg, "|μ̂(ξ)| never exceeds the total mass");
    summary.set("samples", samples.len());
    summary.set("max_abs", max_abs);
    summary.set("mass", m.mass());
    summary.check(Check::at_most("max |μ̂| over the schedule", max_abs, m.mass() * (1.0 + 1e-12)));
    Ok(Artifacts { csv: csv_of(|b| write_samples_csv(&samples, b))?, summary })
}

fn decay(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = Params::new(cfg, &["rule", "min_dim", "max_dim"])?;
    let m = require_measure(cfg)?;
    let sched = schedule_or(cfg, default_schedule);
    let rule: ProxyRule = p.or("rule", ProxyRule::default())?;
    let report = decay_exponent_with(m, &sched, rule)?;
    let mut summary = Summary::new(cfg, "the decay exponent of |μ̂| over dyadic windows estimates the Fourier dimension");
    summary.set("rule", rule);
    summary.set("windows", report.windows.len());
    summary.set("liminf_proxy", report.liminf_proxy);
    summary.set("capped_dim", report.capped_dim);
    if let Some(lo) = p.get::<f64>("min_dim")? {
        summary.check(Check::at_least("capped_dim", report.capped_dim, lo));
    }
    if let Some(hi) = p.get::<f64>("max_dim")? {
        summary.check(Check::at_most("capped_dim", report.capped_dim, hi));
    }
    Ok(Artifacts { csv: csv_of(|b| report.write_csv(b))?, summary })
}

fn energy(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = Params::new(cfg, &["s", "resolution", "cutoff"])?;
    let m = require_measure(cfg)?;
    let s: f64 = p.required("s")?;
    let resolution: usize = p.or("resolution", 1 << 12)?;
    let cutoff: f64 = p.or("cutoff", 2f64.powi(18))?;
    let spatial = energy_spatial(m, s, resolution)?;
    let fourier = energy_fourier(m, s, cutoff)?;
    let mut summary = Summary::new(cfg, "the spatial and Fourier forms of the Riesz energy coincide");
    summary.set("s", s);
    summary.set("spatial", spatial);
    summary.set("fourier", fourier);
    if spatial.infinite || fourier.infinite {
        let both = if spatial.infinite && fourier.infinite { 1.0 } else { 0.0 };
        summary.check(Check::at_least("both forms infinite", both, 1.0));
    } else {
        let gap = (spatial.value - fourier.value).abs();
        summary.set("gap", gap);
        summary.check(Check::at_most("|spatial - fourier|", gap, spatial.err_estimate + fourier.err_estimate));
    }
    let mut csv = String::from("method,s,value,err_estimate,constant,infinite\n");
    for r in [&spatial, &fourier] {
        let EnergyResult { s, value, infinite, method, constant, err_estimate } = r;
        let method = serde_json::to_value(method).expect("method serializes");
        let _ = writeln!(csv, "{},{s},{value},{err_estimate},{constant},{infinite}", method.as_str().unwrap_or(""));
    }
    Ok(Artifacts { csv, summary })
}

/// `Σ w^2` over the atoms of a purely atomic measure.
fn atomic_energy(m: &Measure) -> Option<f64> {
    match m.variant() {
        Variant::Atomic { atoms } => Some(atoms.iter().map(|a| a.weight * a.weight).sum()),
        _ => None,
    }
}

fn wiener(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = Params::new(cfg, &["t", "tol"])?;
    let m = require_measure(cfg)?;
    let t: f64 = p.or("t", 1e4)?;
    let tol: f64 = p.or("tol", 0.02)?;
    let mut csv = String::from("t,average\n");
    let mut last = 0.0;
    for k in (0..=4).rev() {
        let tk = t / 4f64.powi(k);
        last = wiener_average(m, tk)?;
        let _ = writeln!(csv, "{tk},{last}");
    }
    let mut summary = Summary::new(cfg, "the Wiener average of |μ̂|^2 tends to the sum of the squared atom masses");
    summary.set("t", t);
    summary.set("average", last);
    let expected = if m.has_atoms() { atomic_energy(m) } else { Some(0.0) };
    if let Some(e) = expected {
        summary.set("expected", e);
        summary.check(Check::at_most("|average - expected|", (last - e).abs(), tol));
    }
    Ok(Artifacts { csv, summary })
}

fn lowerbound(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = Params::new(cfg, &["eps", "j_max"])?;
    let m = require_measure(cfg)?;
    let eps: f64 = p.required("eps")?;
    let j_max: u64 = p.or("j_max", 1_000_000)?;
    let w = lower_bound_search(m, eps, j_max)?;
    let shown = w.j.unwrap_or(j_max).min(1000);
    let mut csv = String::from("j,abs,bound\n");
    for j in 1..=shown {
        let _ = writeln!(csv, "{j},{},{}", ft(m, j as f64)?.norm(), w.bound);
    }
    let mut summary =
        Summary::new(cfg, "every probability measure on [eps, 1] has some integer j with |μ̂(j)| >= pi eps / (8 + 2 pi eps)");
    summary.set("eps", eps);
    summary.set("j", w.j);
    summary.set("value", w.value);
    summary.set("bound", w.bound);
    summary.check(Check::at_least("|μ̂(j)| at the first witness", w.value, w.bound));
    Ok(Artifacts { csv, summary })
}

fn stability(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = Params::new(cfg, &["other", "tol"])?;
    let tol: f64 = p.or("tol", 0.05)?;
    let (first, second) = match (cfg.measure.clone(), p.get::<Measure>("other")?) {
        (Some(a), Some(b)) => (a, b),
        (None, None) => (measex_density(1, MEASEX_DEFAULT_DEPTH)?, measex_density(-1, MEASEX_DEFAULT_DEPTH)?),
        _ => return Err(RunError::Config("stability needs both `measure` and `params.other`, or neither".into())),
    };
    let sched = schedule_or(cfg, default_schedule);
    let r = stability_experiment(&first, &second, &sched)?;
    let mut summary = Summary::new(cfg, "the decay exponent of a sum is at least the smaller exponent of its terms");
    summary.set("dim_first", r.first.capped_dim);
    summary.set("dim_second", r.second.capped_dim);
    summary.set("dim_sum", r.sum.capped_dim);
    summary.set("margin", r.margin());
    let floor = r.first.capped_dim.min(r.second.capped_dim) - tol;
    summary.check(Check::at_least("dim_sum", r.sum.capped_dim, floor));
    Ok(Artifacts { csv: series_csv(&[("first", &r.first), ("second", &r.second), ("sum", &r.sum)]), summary })
}

fn matrix_image(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = Params::new(cfg, &["scale", "tol"])?;
    let m = require_measure(cfg)?;
    let scale: Scale = p.required("scale")?;
    let tol: f64 = p.or("tol", 0.05)?;
    let sched = schedule_or(cfg, default_schedule);
    let r = matrix_image_experiment(m, &scale, &sched)?;
    let mut summary = Summary::new(
        cfg,
        "adding the image under a linear map without unit-modulus eigenvalues keeps the decay exponent",
    );
    summary.set("dim_original", r.original.capped_dim);
    summary.set("dim_with_image", r.with_image.capped_dim);
    let gap = (r.original.capped_dim - r.with_image.capped_dim).abs();
    summary.check(Check::at_most("|dim_original - dim_with_image|", gap, tol));
    Ok(Artifacts { csv: series_csv(&[("original", &r.original), ("with_image", &r.with_image)]), summary })
}

/// For each block `k`, dilates by `2^{l_k}` mod 1 and searches for an integer
/// witness with `|μ̂| >= 2^{-len(k)} / 5`.
fn block_witnesses(spec: &DigitScheduleSpec, j_max: u64, summary: &mut Summary) -> Res<Vec<String>> {
    let mu = bn_truncated_measure(spec)?;
    let mut rows = Vec::new();
    for k in spec.n..=spec.k_max {
        let l = spec.offset(k)?;
        let len = spec.block_length(k)?;
        let image = mu.scaled(2f64.powi(l as i32), 0.0, true)?;
        let eps = 2f64.powi(-(len as i32));
        let w = lower_bound_search(&image, eps, j_max)?;
        summary.check(Check::at_least(&format!("block {k}: |μ̂(2^l j)|"), w.value, eps / 5.0));
        let j = w.j.map_or(String::new(), |j| j.to_string());
        rows.push(format!("{k},{l},{len},{eps},{j},{},{}", w.value, w.bound));
    }
    Ok(rows)
}

fn setex(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = Params::new(cfg, &["n", "k_max", "j_max"])?;
    let spec = DigitScheduleSpec::setex(p.or("n", 1)?, p.or("k_max", 5)?);
    let j_max: u64 = p.or("j_max", 100_000)?;
    let mut summary = Summary::new(
        cfg,
        "after dilation by 2^l_k the digit-restricted measure has some |μ̂(2^l_k j)| >= 2^-k / 5",
    );
    summary.set("spec", &spec);
    let mass = spec.digit_product()?.lebesgue_mass();
    let floor = 1.0 - (spec.n..=spec.k_max).map(|k| 2f64.powi(-(k as i32))).sum::<f64>();
    summary.set("lebesgue_mass", mass);
    summary.check(Check::at_least("Lebesgue measure of the set", mass, floor));
    let rows = block_witnesses(&spec, j_max, &mut summary)?;
    let csv = format!("k,offset,length,eps,j,value,bound\n{}", rows.iter().map(|r| format!("{r}\n")).collect::<String>());
    Ok(Artifacts { csv, summary })
}

fn setexc(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = Params::new(cfg, &["s", "b", "n", "k_max", "j_max", "sum_terms", "sum_tol"])?;
    let s: f64 = p.or("s", 0.9)?;
    let b: f64 = p.or("b", 0.3)?;
    let n: u32 = p.or("n", 1)?;
    let spec = DigitScheduleSpec::setexc(s, b, n, p.or("k_max", 3)?);
    let j_max: u64 = p.or("j_max", 100_000)?;
    let sum_terms: u32 = p.or("sum_terms", 40)?;
    let sum_tol: f64 = p.or("sum_tol", 1e-9)?;
    if sum_terms < n + 1 {
        return Err(RunError::Config(format!("sum_terms must exceed n = {n}")));
    }
    let mut summary = Summary::new(
        cfg,
        "the covering sums of the complement converge and each block still carries a large transform value",
    );
    summary.set("spec", &spec);
    let rows = block_witnesses(&spec, j_max, &mut summary)?;
    let long = DigitScheduleSpec { k_max: sum_terms, ..spec.clone() };
    let sums = long.hausdorff_partial_sums()?;
    let tail = sums[sums.len() - 1] - sums[sums.len() / 2];
    summary.set("covering_sum", sums[sums.len() - 1]);
    summary.set("covering_tail", tail);
    summary.check(Check::at_most("covering sum tail over the second half of the terms", tail, sum_tol));
    let mut csv = String::from("k,offset,length,eps,j,value,bound\n");
    for r in &rows {
        let _ = writeln!(csv, "{r}");
    }
    csv.push_str("\nk,covering_partial_sum\n");
    for (i, v) in sums.iter().enumerate() {
        let _ = writeln!(csv, "{},{v}", n + i as u32);
    }
    Ok(Artifacts { csv, summary })
}

fn measex(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = Params::new(cfg, &["depth", "rule"])?;
    let depth: u32 = p.or("depth", MEASEX_DEFAULT_DEPTH)?;
    let rule: ProxyRule = p.or("rule", ProxyRule::default())?;
    let g = measex_density(1, depth)?;
    let h = measex_density(-1, depth)?;
    let sum = Measure::mixture(&[g.clone(), h.clone()], &[1.0, 1.0])?;
    let sched = schedule_or(cfg, default_schedule);
    let lebesgue = Measure::lebesgue();
    let mut sum_error: f64 = 0.0;
    for xi in sched.frequencies()? {
        sum_error = sum_error.max((ft(&sum, xi)? - 2.0 * ft(&lebesgue, xi)?).norm());
    }
    let rg = decay_exponent_with(&g, &sched, rule)?;
    let rh = decay_exponent_with(&h, &sched, rule)?;
    let rs = decay_exponent_with(&sum, &sched, rule)?;
    let mut summary =
        Summary::new(cfg, "two densities with Fourier dimension zero can sum to twice Lebesgue measure, of dimension one");
    summary.set("depth", depth);
    summary.set("dim_g", rg.capped_dim);
    summary.set("dim_h", rh.capped_dim);
    summary.set("dim_sum", rs.capped_dim);
    summary.set("sum_error", sum_error);
    summary.check(Check::at_most("dim_g", rg.capped_dim, 0.05));
    summary.check(Check::at_most("dim_h", rh.capped_dim, 0.05));
    summary.check(Check::at_least("dim_sum", rs.capped_dim, 0.95));
    summary.check(Check::at_most("max |(g + h)^ - 2 λ^|", sum_error, 1e-12));
    Ok(Artifacts { csv: series_csv(&[("g", &rg), ("h", &rh), ("sum", &rs)]), summary })
}

fn cantor(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = Params::new(cfg, &["k_max", "rule"])?;
    let k_max: i32 = p.or("k_max", 12)?;
    let rule: ProxyRule = p.or("rule", ProxyRule::default())?;
    let c = cantor_measure();
    let base = ft(&c, 1.0)?.norm();
    let mut drift: f64 = 0.0;
    for k in 1..=k_max {
        drift = drift.max((ft(&c, 3f64.powi(k))?.norm() - base).abs());
    }
    let report = decay_exponent_with(&c, &schedule_or(cfg, cantor_schedule), rule)?;
    let mut summary = Summary::new(cfg, "the middle-third Cantor measure has |μ̂(3^k)| constant, so Fourier dimension zero");
    summary.set("abs_at_one", base);
    summary.set("max_drift", drift);
    summary.set("capped_dim", report.capped_dim);
    summary.check(Check::at_most("max_k ||μ̂(3^k)| - |μ̂(1)||", drift, 1e-10));
    summary.check(Check::at_most("capped_dim", report.capped_dim, 0.05));
    Ok(Artifacts { csv: csv_of(|b| report.write_csv(b))?, summary })
}

fn galois(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = Params::new(cfg, &["nx", "ny", "models", "trials", "zero_prob"])?;
    let nx: usize = p.or("nx", 8)?;
    let ny: usize = p.or("ny", 8)?;
    let models: usize = p.or("models", 1)?;
    let trials: usize = p.or("trials", 100)?;
    let zero_prob: f64 = p.or("zero_prob", 0.5)?;
    if nx == 0 || ny == 0 || models == 0 || !(0.0..=1.0).contains(&zero_prob) {
        return Err(RunError::Config("need nx, ny, models >= 1 and zero_prob in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut csv = String::from("model,checks,violations\n");
    let (mut checks, mut violations, mut first) = (0, 0, None);
    for i in 0..models {
        let model = IncidenceModel::random(nx, ny, zero_prob, &mut rng);
        let r = check_perp_properties(&model, trials, &mut rng)?;
        let _ = writeln!(csv, "{i},{},{}", r.checks, r.violations);
        checks += r.checks;
        violations += r.violations;
        first = first.or(r.first_counterexample);
    }
    let mut summary = Summary::new(
        cfg,
        "the polar operator reverses inclusions and its double polar is a closure operator",
    );
    summary.set("perp_checks", checks);
    summary.set("violations", violations);
    summary.set("first_counterexample", first);
    summary.check(Check::at_most("violations", violations as f64, 0.0));
    Ok(Artifacts { csv, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn summary_json(cfg: &ExperimentConfig) -> Value {
        serde_json::from_str(&execute(cfg).unwrap().summary.to_json()).unwrap()
    }

    #[test]
    fn every_listed_experiment_dispatches() {
        for name in EXPERIMENTS {
            let e = execute(&ExperimentConfig::new(name).with_param("no_such_param", 1));
            assert!(matches!(e, Err(RunError::Config(ref m)) if m.contains("no_such_param")), "{name}: {e:?}");
        }
        assert_eq!(execute(&ExperimentConfig::new("nope")).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn lowerbound_dirac_one() {
        let mut cfg = ExperimentConfig::new("lowerbound").with_param("eps", 1.0);
        cfg.measure = Some(Measure::dirac(1.0).unwrap());
        let v = summary_json(&cfg);
        assert_eq!(v["j"], json!(1));
        assert!((v["bound"].as_f64().unwrap() - 0.2200).abs() < 1e-4);
        assert_eq!(v["passed"], json!(true));
    }

    #[test]
    fn galois_seed_seven() {
        let mut cfg = ExperimentConfig::new("galois").with_param("trials", 100);
        cfg.seed = 7;
        let v = summary_json(&cfg);
        assert_eq!(v["violations"], json!(0));
        assert_eq!(v["perp_checks"], json!(500));
    }

    #[test]
    fn measex_fields() {
        let v = summary_json(&ExperimentConfig::new("measex"));
        assert!(v["dim_g"].as_f64().unwrap() <= 0.05);
        assert!(v["dim_h"].as_f64().unwrap() <= 0.05);
        assert!(v["dim_sum"].as_f64().unwrap() >= 0.95);
        assert!(v["claim"].as_str().unwrap().contains("twice Lebesgue"));
    }

    #[test]
    fn failed_bound_exits_four() {
        let mut cfg = ExperimentConfig::new("decay").with_param("min_dim", 0.5);
        cfg.measure = Some(Measure::dirac(0.3).unwrap());
        let s = execute(&cfg).unwrap().summary;
        assert!(!s.passed);
        assert_eq!(s.exit_code(), 4);
    }

    #[test]
    fn error_classes() {
        let mut cfg = ExperimentConfig::new("energy").with_param("s", 0.5).with_param("cutoff", 1.5);
        cfg.measure = Some(Measure::lebesgue());
        assert_eq!(execute(&cfg).unwrap_err().exit_code(), 3);
        let mut cfg = ExperimentConfig::new("lowerbound").with_param("eps", 0.5);
        cfg.measure = Some(Measure::lebesgue());
        assert_eq!(execute(&cfg).unwrap_err().exit_code(), 2);
        assert_eq!(execute(&ExperimentConfig::new("transform")).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn config_round_trip() {
        let text = r#"{"experiment": "wiener", "measure": {"ambient_dim": 1, "variant": {"kind": "Atomic",
            "atoms": [{"position": [0.2], "weight": 0.5}, {"position": [0.7], "weight": 0.5}]}},
            "params": {"t": 1000.0}, "output": "w", "seed": 3}"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(ExperimentConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap(), cfg);
        let v = summary_json(&cfg);
        assert_eq!(v["expected"], json!(0.5));
        assert_eq!(v["passed"], json!(true));
        assert!(ExperimentConfig::from_json(r#"{"experiment": "wiener", "bogus": 1}"#).is_err());
    }

    #[test]
    fn rerun_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ExperimentConfig::new("galois").with_param("models", 3);
        cfg.seed = 42;
        cfg.output = dir.path().join("a").to_string_lossy().into_owned();
        run(&cfg).unwrap();
        let first = std::fs::read(dir.path().join("a.json")).unwrap();
        cfg.output = dir.path().join("sub/b").to_string_lossy().into_owned();
        run(&cfg).unwrap();
        assert_eq!(first, std::fs::read(dir.path().join("sub/b.json")).unwrap());
        assert_eq!(
            std::fs::read(dir.path().join("a.csv")).unwrap(),
            std::fs::read(dir.path().join("sub/b.csv")).unwrap()
        );
    }
}
