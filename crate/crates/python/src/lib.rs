//! Python bindings: measures, transforms, decay and energy estimates, the
//! named constructions and the experiment runner.

use fdlab::band::{self, IncidenceModel, Side, SubsetPair};
use fdlab::constructions::{self, DigitScheduleSpec};
use fdlab::dimension::{self, EnergyResult, ProxyRule};
use fdlab::experiments::{self, ExperimentConfig, RunError};
use fdlab::measure::{DigitBlock, DigitProduct, Window};
use fdlab::FrequencySchedule;
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: RunError) -> PyErr {
    match e {
        RunError::Config(m) => PyValueError::new_err(m),
        RunError::Numerical(m) => PyArithmeticError::new_err(m),
        RunError::Io(m) => PyOSError::new_err(m),
    }
}

fn err(e: fdlab::Error) -> PyErr {
    to_py(RunError::from(e))
}

fn parse<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> PyResult<T> {
    serde_json::from_str(text).map_err(|e| PyValueError::new_err(format!("bad {what} JSON: {e}")))
}

fn schedule_or_default(schedule: Option<&str>) -> PyResult<FrequencySchedule> {
    schedule.map_or_else(|| Ok(experiments::default_schedule()), |s| parse("schedule", s))
}

/// A finite positive measure on `[0, 1]^d`.
#[pyclass(name = "Measure", module = "fdlab_py", frozen, from_py_object)]
#[derive(Clone)]
struct PyMeasure {
    inner: fdlab::Measure,
}

impl From<fdlab::Measure> for PyMeasure {
    fn from(inner: fdlab::Measure) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyMeasure {
    #[staticmethod]
    fn lebesgue() -> Self {
        fdlab::Measure::lebesgue().into()
    }

    #[staticmethod]
    fn dirac(x: f64) -> PyResult<Self> {
        fdlab::Measure::dirac(x).map(Into::into).map_err(err)
    }

    /// Atoms as `(position, weight)` pairs.
    #[staticmethod]
    fn atomic(atoms: Vec<(f64, f64)>) -> PyResult<Self> {
        fdlab::Measure::atomic_1d(&atoms).map(Into::into).map_err(err)
    }

    /// Normalized Lebesgue measure on a union of `(a, b)` intervals.
    #[staticmethod]
    fn uniform(intervals: Vec<(f64, f64)>) -> PyResult<Self> {
        fdlab::Measure::uniform_on_intervals(&intervals).map(Into::into).map_err(err)
    }

    /// Density `1 + Σ c sin(2 pi f x)` from `(c, f)` pairs.
    #[staticmethod]
    fn trig_density(terms: Vec<(f64, u64)>) -> PyResult<Self> {
        fdlab::Measure::trig_density(&terms).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn self_similar(base: u32, digits: Vec<u32>) -> PyResult<Self> {
        fdlab::Measure::self_similar_digit(base, &digits).map(Into::into).map_err(err)
    }

    /// Blocks are `(offset, length, forbidden_pattern)` triples.
    #[staticmethod]
    fn digit_product(base: u32, depth: u32, blocks: Vec<(u32, u32, String)>) -> PyResult<Self> {
        let blocks = blocks.iter().map(|(o, l, p)| DigitBlock::new(*o, *l, p)).collect();
        let dp = DigitProduct::new(base, depth, blocks).map_err(err)?;
        fdlab::Measure::digit_product(dp).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn mixture(components: Vec<PyMeasure>, weights: Vec<f64>) -> PyResult<Self> {
        let parts: Vec<fdlab::Measure> = components.into_iter().map(|c| c.inner).collect();
        fdlab::Measure::mixture(&parts, &weights).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        fdlab::Measure::from_json(text).map(Into::into).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[pyo3(signature = (a, b = 0.0, mod1 = false))]
    fn scaled(&self, a: f64, b: f64, mod1: bool) -> PyResult<Self> {
        self.inner.scaled(a, b, mod1).map(Into::into).map_err(err)
    }

    fn translate(&self, t: f64) -> PyResult<Self> {
        self.inner.translate(t).map(Into::into).map_err(err)
    }

    fn convolve(&self, other: &PyMeasure) -> PyResult<Self> {
        self.inner.convolve(&other.inner).map(Into::into).map_err(err)
    }

    /// Multiplies by the bump `((1 - ((x - center)/radius)^2)_+)^order`.
    #[pyo3(signature = (center, radius, order = 2))]
    fn smooth_cut(&self, center: f64, radius: f64, order: u32) -> PyResult<Self> {
        let w = Window::new(center, radius, order).map_err(err)?;
        dimension::smooth_cut(&self.inner, w).map(Into::into).map_err(err)
    }

    fn mass(&self) -> f64 {
        self.inner.mass()
    }

    fn has_atoms(&self) -> bool {
        self.inner.has_atoms()
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    fn __repr__(&self) -> String {
        format!("Measure({})", self.inner.to_json())
    }
}

/// `∫ exp(-2 pi i xi x) dμ(x)`.
#[pyfunction]
fn ft(m: &PyMeasure, xi: f64) -> PyResult<Complex64> {
    fdlab::ft(&m.inner, xi).map_err(err)
}

#[pyfunction]
fn ft_many(m: &PyMeasure, xis: Vec<f64>) -> PyResult<Vec<Complex64>> {
    xis.iter().map(|&xi| fdlab::ft(&m.inner, xi).map_err(err)).collect()
}

/// The same transform by adaptive quadrature.
#[pyfunction]
#[pyo3(signature = (m, xi, tol = 1e-10))]
fn ft_quadrature(m: &PyMeasure, xi: f64, tol: f64) -> PyResult<Complex64> {
    fdlab::ft_quadrature(&m.inner, xi, tol).map_err(err)
}

#[pyfunction]
fn oscillatory_integral(alpha: f64, beta: f64) -> Complex64 {
    fdlab::oscillatory_integral(alpha, beta)
}

#[pyfunction]
fn wiener_average(m: &PyMeasure, t: f64) -> PyResult<f64> {
    fdlab::wiener_average(&m.inner, t).map_err(err)
}

/// Decay estimate over `schedule` (JSON), or the default schedule.
///
/// Returns `(capped_dim, liminf_proxy, [(exp_lo, max_abs), ...])`.
#[pyfunction]
#[pyo3(signature = (m, schedule = None, rule = None))]
fn decay_exponent(m: &PyMeasure, schedule: Option<&str>, rule: Option<&str>) -> PyResult<(f64, f64, Vec<(i32, f64)>)> {
    let sched = schedule_or_default(schedule)?;
    let rule: ProxyRule = match rule {
        Some(r) => parse("rule", &format!("\"{r}\""))?,
        None => ProxyRule::default(),
    };
    let r = dimension::decay_exponent_with(&m.inner, &sched, rule).map_err(err)?;
    Ok((r.capped_dim, r.liminf_proxy, r.windows.iter().map(|w| (w.exp_lo, w.max_abs)).collect()))
}

/// Riesz energy; returns `(value, err_estimate, infinite)`.
#[pyfunction]
#[pyo3(signature = (m, s, method = "spatial", resolution = 4096, cutoff = 262144.0))]
fn energy(m: &PyMeasure, s: f64, method: &str, resolution: usize, cutoff: f64) -> PyResult<(f64, f64, bool)> {
    let r: EnergyResult = match method {
        "spatial" => dimension::energy_spatial(&m.inner, s, resolution),
        "fourier" => dimension::energy_fourier(&m.inner, s, cutoff),
        other => return Err(PyValueError::new_err(format!("method must be spatial or fourier, got {other}"))),
    }
    .map_err(err)?;
    Ok((r.value, r.err_estimate, r.infinite))
}

/// First integer `j` with `|μ̂(j)|` above the threshold for `eps`;
/// returns `(j or None, value, threshold)`.
#[pyfunction]
#[pyo3(signature = (m, eps, j_max = 1_000_000))]
fn lower_bound_search(m: &PyMeasure, eps: f64, j_max: u64) -> PyResult<(Option<u64>, f64, f64)> {
    let w = dimension::lower_bound_search(&m.inner, eps, j_max).map_err(err)?;
    Ok((w.j, w.value, w.bound))
}

#[pyfunction]
#[pyo3(signature = (sign, depth = constructions::MEASEX_DEFAULT_DEPTH))]
fn measex_density(sign: i32, depth: u32) -> PyResult<PyMeasure> {
    constructions::measex_density(sign, depth).map(Into::into).map_err(err)
}

#[pyfunction]
fn cantor_measure() -> PyMeasure {
    constructions::cantor_measure().into()
}

/// Normalized Lebesgue measure on the set whose digit blocks
/// `k^2 + 1 ..= k^2 + k`, `n <= k <= k_max`, are not all zero.
#[pyfunction]
fn setex_measure(n: u32, k_max: u32) -> PyResult<PyMeasure> {
    constructions::bn_truncated_measure(&DigitScheduleSpec::setex(n, k_max)).map(Into::into).map_err(err)
}

/// Indices on the opposite side that pair to zero with every listed index.
/// `side` is `"measures"` (rows) or `"sets"` (columns).
#[pyfunction]
fn perp(pairing: Vec<Vec<f64>>, indices: Vec<usize>, side: &str) -> PyResult<Vec<usize>> {
    let model = IncidenceModel::new(pairing).map_err(err)?;
    let (side, len) = match side {
        "measures" => (Side::Measures, model.nx),
        "sets" => (Side::Sets, model.ny),
        other => return Err(PyValueError::new_err(format!("side must be measures or sets, got {other}"))),
    };
    if let Some(i) = indices.iter().find(|&&i| i >= len) {
        return Err(PyValueError::new_err(format!("index {i} out of range for {len} members")));
    }
    Ok(band::perp(&model, &SubsetPair::from_indices(side, len, &indices)).indices())
}

#[pyfunction]
fn quasiconvex_weights(constants: Vec<f64>) -> PyResult<Vec<f64>> {
    band::quasiconvex_weights(&constants).map(|q| q.weights).map_err(err)
}

#[pyfunction]
fn experiments_list() -> Vec<&'static str> {
    experiments::EXPERIMENTS.to_vec()
}

/// Runs an experiment from its JSON config without writing files and
/// returns the JSON summary.
#[pyfunction]
fn run_experiment(config: &str) -> PyResult<String> {
    let cfg = ExperimentConfig::from_json(config).map_err(to_py)?;
    let summary = experiments::execute(&cfg).map_err(to_py)?.summary;
    Ok(summary.to_json())
}

#[pymodule]
fn fdlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMeasure>()?;
    m.add_function(wrap_pyfunction!(ft, m)?)?;
    m.add_function(wrap_pyfunction!(ft_many, m)?)?;
    m.add_function(wrap_pyfunction!(ft_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(oscillatory_integral, m)?)?;
    m.add_function(wrap_pyfunction!(wiener_average, m)?)?;
    m.add_function(wrap_pyfunction!(decay_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound_search, m)?)?;
    m.add_function(wrap_pyfunction!(measex_density, m)?)?;
    m.add_function(wrap_pyfunction!(cantor_measure, m)?)?;
    m.add_function(wrap_pyfunction!(setex_measure, m)?)?;
    m.add_function(wrap_pyfunction!(perp, m)?)?;
    m.add_function(wrap_pyfunction!(quasiconvex_weights, m)?)?;
    m.add_function(wrap_pyfunction!(experiments_list, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
