//! Python bindings for the `secrelay` core library.
//!
//! Parameters travel as a `SystemParams` object; scheme, regime, criterion
//! and axis selectors are plain strings ("AF"/"DF", "large-source-power",
//! "capacity", "relay-power", ...). Results come back as floats, tuples or
//! dicts.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use secrelay_core::analytic::{self, Regime, Scheme};
use secrelay_core::cli::{self, Overrides, ReportFormat};
use secrelay_core::decision::{self, Criterion, PowerAxis};
use secrelay_core::montecarlo::{self, McEstimate};

fn to_py(err: secrelay_core::Error) -> PyErr {
    match err {
        secrelay_core::Error::Io(e) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse<T>(s: &str) -> PyResult<T>
where
    T: std::str::FromStr<Err = secrelay_core::Error>,
{
    s.parse().map_err(to_py)
}

/// Link description. Powers are linear; use `SystemParams.from_db` for dB input.
#[pyclass(name = "SystemParams", module = "secrelay", from_py_object)]
#[derive(Clone)]
struct PySystemParams {
    inner: secrelay_core::SystemParams,
}

#[pymethods]
impl PySystemParams {
    #[new]
    #[pyo3(signature = (
        p_s = 100.0, p_r = 100.0, alpha_sr = 1.0, alpha_rd = 1.0, alpha_re = 1.0,
        rho = 0.9, n_r = 100, w_hz = 1.0e4, epsilon = 0.01
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        p_s: f64,
        p_r: f64,
        alpha_sr: f64,
        alpha_rd: f64,
        alpha_re: f64,
        rho: f64,
        n_r: u32,
        w_hz: f64,
        epsilon: f64,
    ) -> PyResult<Self> {
        let inner = secrelay_core::SystemParams {
            p_s,
            p_r,
            alpha_sr,
            alpha_rd,
            alpha_re,
            rho,
            n_r,
            w_hz,
            epsilon,
        }
        .validate()
        .map_err(to_py)?;
        Ok(PySystemParams { inner })
    }

    /// Same as the constructor but with both transmit powers given in dB.
    #[staticmethod]
    #[pyo3(signature = (
        p_s_db, p_r_db, alpha_sr = 1.0, alpha_rd = 1.0, alpha_re = 1.0,
        rho = 0.9, n_r = 100, w_hz = 1.0e4, epsilon = 0.01
    ))]
    #[allow(clippy::too_many_arguments)]
    fn from_db(
        p_s_db: f64,
        p_r_db: f64,
        alpha_sr: f64,
        alpha_rd: f64,
        alpha_re: f64,
        rho: f64,
        n_r: u32,
        w_hz: f64,
        epsilon: f64,
    ) -> PyResult<Self> {
        let p_s = secrelay_core::params::from_decibel(p_s_db).map_err(to_py)?;
        let p_r = secrelay_core::params::from_decibel(p_r_db).map_err(to_py)?;
        Self::new(p_s, p_r, alpha_sr, alpha_rd, alpha_re, rho, n_r, w_hz, epsilon)
    }

    /// Copy with some fields replaced, e.g. `p.replace(alpha_re=2.0)`.
    #[pyo3(signature = (**changes))]
    fn replace(&self, changes: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut p = self.inner;
        if let Some(changes) = changes {
            for (k, v) in changes.iter() {
                let key: String = k.extract()?;
                match key.as_str() {
                    "p_s" => p.p_s = v.extract()?,
                    "p_r" => p.p_r = v.extract()?,
                    "alpha_sr" => p.alpha_sr = v.extract()?,
                    "alpha_rd" => p.alpha_rd = v.extract()?,
                    "alpha_re" => p.alpha_re = v.extract()?,
                    "rho" => p.rho = v.extract()?,
                    "n_r" => p.n_r = v.extract()?,
                    "w_hz" => p.w_hz = v.extract()?,
                    "epsilon" => p.epsilon = v.extract()?,
                    _ => return Err(PyValueError::new_err(format!("unknown field `{key}`"))),
                }
            }
        }
        Ok(PySystemParams {
            inner: p.validate().map_err(to_py)?,
        })
    }

    #[getter]
    fn p_s(&self) -> f64 {
        self.inner.p_s
    }
    #[getter]
    fn p_r(&self) -> f64 {
        self.inner.p_r
    }
    #[getter]
    fn alpha_sr(&self) -> f64 {
        self.inner.alpha_sr
    }
    #[getter]
    fn alpha_rd(&self) -> f64 {
        self.inner.alpha_rd
    }
    #[getter]
    fn alpha_re(&self) -> f64 {
        self.inner.alpha_re
    }
    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho
    }
    #[getter]
    fn n_r(&self) -> u32 {
        self.inner.n_r
    }
    #[getter]
    fn w_hz(&self) -> f64 {
        self.inner.w_hz
    }
    #[getter]
    fn epsilon(&self) -> f64 {
        self.inner.epsilon
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "SystemParams(p_s={}, p_r={}, alpha_sr={}, alpha_rd={}, alpha_re={}, rho={}, n_r={}, w_hz={}, epsilon={})",
            p.p_s, p.p_r, p.alpha_sr, p.alpha_rd, p.alpha_re, p.rho, p.n_r, p.w_hz, p.epsilon
        )
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

#[pyfunction]
fn from_decibel(db: f64) -> PyResult<f64> {
    secrelay_core::params::from_decibel(db).map_err(to_py)
}

#[pyfunction]
fn to_decibel(linear: f64) -> f64 {
    secrelay_core::params::to_decibel(linear)
}

#[pyfunction]
fn legit_capacity(params: &PySystemParams, scheme: &str) -> PyResult<f64> {
    Ok(analytic::legit_capacity(&params.inner, parse(scheme)?))
}

#[pyfunction]
fn secrecy_outage_capacity(params: &PySystemParams, scheme: &str) -> PyResult<f64> {
    Ok(analytic::secrecy_outage_capacity(&params.inner, parse(scheme)?))
}

#[pyfunction]
fn interception_probability(params: &PySystemParams, scheme: &str) -> PyResult<f64> {
    Ok(analytic::interception_probability(&params.inner, parse(scheme)?).probability())
}

/// `{"scheme", "c_d", "c_soc", "p0"}` for one scheme.
#[pyfunction]
fn scheme_report<'py>(
    py: Python<'py>,
    params: &PySystemParams,
    scheme: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let r = analytic::scheme_report(&params.inner, parse(scheme)?);
    let d = PyDict::new(py);
    d.set_item("scheme", r.scheme.to_string())?;
    d.set_item("c_d", r.c_d)?;
    d.set_item("c_soc", r.c_soc)?;
    d.set_item("p0", r.p0)?;
    Ok(d)
}

#[pyfunction]
fn eavesdropper_cdf_af(x: f64, params: &PySystemParams) -> PyResult<f64> {
    analytic::eavesdropper_cdf_af(x, &params.inner).map_err(to_py)
}

/// `(c_soc_limit, p0_limit)` as the selected transmit power grows without bound.
#[pyfunction]
fn asymptotic_limit(params: &PySystemParams, regime: &str, scheme: &str) -> PyResult<(f64, f64)> {
    let regime: Regime = parse(regime)?;
    let scheme: Scheme = parse(scheme)?;
    let l = analytic::asymptotic_limit(&params.inner, regime, scheme).map_err(to_py)?;
    Ok((l.c_soc_limit, l.p0_limit))
}

fn estimate_dict<'py>(py: Python<'py>, e: &McEstimate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", e.value)?;
    d.set_item("std_error", e.std_error)?;
    d.set_item("trials", e.trials)?;
    d.set_item("seed", e.seed)?;
    Ok(d)
}

/// Monte Carlo estimate; returns `{"c_soc": {...}, "p0": {...}}`.
#[pyfunction]
#[pyo3(signature = (scheme, params, trials = 10_000, seed = 1))]
fn estimate<'py>(
    py: Python<'py>,
    scheme: &str,
    params: &PySystemParams,
    trials: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let scheme: Scheme = parse(scheme)?;
    let p = params.inner;
    let out = py
        .detach(|| montecarlo::estimate(scheme, &p, trials, seed))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("c_soc", estimate_dict(py, &out.c_soc)?)?;
    d.set_item("p0", estimate_dict(py, &out.p0)?)?;
    Ok(d)
}

/// Per-trial `(g_sr, g_d, g_e)` sufficient statistics.
#[pyfunction]
#[pyo3(signature = (params, trials, seed = 1))]
fn sample_statistics(
    py: Python<'_>,
    params: &PySystemParams,
    trials: usize,
    seed: u64,
) -> PyResult<Vec<(f64, f64, f64)>> {
    let p = params.inner;
    let stats = py
        .detach(|| montecarlo::sample_statistics(&p, trials, seed))
        .map_err(to_py)?;
    Ok(stats.iter().map(|s| (s.g_sr, s.g_d, s.g_e)).collect())
}

#[pyfunction]
fn empirical_quantile(samples: Vec<f64>, epsilon: f64) -> PyResult<f64> {
    montecarlo::empirical_quantile(&samples, epsilon).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (params, criterion = "capacity"))]
fn compare_schemes<'py>(
    py: Python<'py>,
    params: &PySystemParams,
    criterion: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let criterion: Criterion = parse(criterion)?;
    let v = decision::compare_schemes(&params.inner, criterion);
    let d = PyDict::new(py);
    d.set_item("delta_c_soc", v.delta_c_soc)?;
    d.set_item("delta_p0", v.delta_p0)?;
    d.set_item("recommended", v.recommended.to_string())?;
    Ok(d)
}

/// dB values in `[lo_db, hi_db]` where AF and DF swap places.
#[pyfunction]
fn find_switching_point(
    params: &PySystemParams,
    axis: &str,
    lo_db: f64,
    hi_db: f64,
) -> PyResult<Vec<f64>> {
    let axis: PowerAxis = parse(axis)?;
    decision::find_switching_point(&params.inner, axis, lo_db, hi_db).map_err(to_py)
}

/// `(p_r_opt_db, c_soc_opt)` for one scheme.
#[pyfunction]
fn optimal_relay_power(
    params: &PySystemParams,
    lo_db: f64,
    hi_db: f64,
    scheme: &str,
) -> PyResult<(f64, f64)> {
    let scheme: Scheme = parse(scheme)?;
    let o = decision::optimal_relay_power(&params.inner, lo_db, hi_db, scheme).map_err(to_py)?;
    Ok((o.p_r_opt_db, o.c_soc_opt))
}

/// Runs a sweep described by a JSON config document and returns the
/// rendered table (`"csv"` or `"json"`).
#[pyfunction]
#[pyo3(signature = (config, format = "csv", seed = None, trials = None))]
fn run_sweep(
    py: Python<'_>,
    config: &str,
    format: &str,
    seed: Option<u64>,
    trials: Option<usize>,
) -> PyResult<String> {
    let format: ReportFormat = parse(format)?;
    let spec = cli::parse_config_with(config, Overrides { seed, trials }).map_err(to_py)?;
    let bytes = py
        .detach(|| cli::run_sweep(&spec).and_then(|rows| cli::render_report(&rows, format)))
        .map_err(to_py)?;
    String::from_utf8(bytes).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Config documents of a built-in preset as `[(label, json_text), ...]`.
#[pyfunction]
fn preset(name: &str) -> PyResult<Vec<(String, String)>> {
    let runs = cli::preset(name).map_err(to_py)?;
    Ok(runs
        .into_iter()
        .map(|r| (r.label, r.document.to_string()))
        .collect())
}

#[pymodule]
#[pyo3(name = "secrelay")]
fn secrelay_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystemParams>()?;
    m.add_function(wrap_pyfunction!(from_decibel, m)?)?;
    m.add_function(wrap_pyfunction!(to_decibel, m)?)?;
    m.add_function(wrap_pyfunction!(legit_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(secrecy_outage_capacity, m)?)?;
    m.add_function(wrap_pyfunction!(interception_probability, m)?)?;
    m.add_function(wrap_pyfunction!(scheme_report, m)?)?;
    m.add_function(wrap_pyfunction!(eavesdropper_cdf_af, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_limit, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(sample_statistics, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_quantile, m)?)?;
    m.add_function(wrap_pyfunction!(compare_schemes, m)?)?;
    m.add_function(wrap_pyfunction!(find_switching_point, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_relay_power, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(preset, m)?)?;
    Ok(())
}
