//! Python bindings: instances, single runs, characteristic times, thresholds
//! and sweeps.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use adaptt::algorithms::run;
use adaptt::bandit::{best_arm, gaps};
use adaptt::chartime::{self, MirrorAscentConfig, OracleObjective};
use adaptt::harness::{self, SweepConfig};
use adaptt::threshold;
use adaptt::{Algorithm, Error, RngStream, RunConfig};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NonConvergence { .. } | Error::Io(_) | Error::Csv(_) | Error::Json(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(name = "BanditInstance", frozen, module = "pyadaptt")]
struct PyBandit {
    inner: adaptt::BanditInstance,
}

#[pymethods]
impl PyBandit {
    #[new]
    fn new(means: Vec<f64>) -> PyResult<Self> {
        Ok(Self { inner: adaptt::BanditInstance::new(means).map_err(to_py)? })
    }

    /// One of `mu1`..`mu6`, or comma-separated means.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        let (_, inner) = harness::resolve_instance(name).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn means(&self) -> Vec<f64> {
        self.inner.means().to_vec()
    }

    #[getter]
    fn arms(&self) -> usize {
        self.inner.arms()
    }

    fn best_arm(&self) -> PyResult<usize> {
        best_arm(&self.inner).map_err(to_py)
    }

    fn gaps(&self) -> PyResult<Vec<f64>> {
        Ok(gaps(&self.inner).map_err(to_py)?.gaps)
    }

    fn __repr__(&self) -> String {
        format!("BanditInstance({:?})", self.inner.means())
    }
}

#[pyclass(name = "RunResult", frozen, get_all, module = "pyadaptt")]
struct PyRunResult {
    algorithm: String,
    stopping_time: u64,
    recommended_arm: usize,
    correct: bool,
    seed: u64,
    stream: u64,
    counts: Vec<u64>,
    capped: bool,
    seconds: f64,
}

#[pymethods]
impl PyRunResult {
    fn __repr__(&self) -> String {
        format!(
            "RunResult(algorithm={:?}, stopping_time={}, recommended_arm={}, correct={}, capped={})",
            self.algorithm, self.stopping_time, self.recommended_arm, self.correct, self.capped
        )
    }
}

#[pyclass(name = "CharTimeReport", frozen, get_all, module = "pyadaptt")]
struct PyCharTime {
    value: f64,
    allocation: Vec<f64>,
    solver: String,
    iterations: usize,
    residual: f64,
}

#[pymethods]
impl PyCharTime {
    fn __repr__(&self) -> String {
        format!("CharTimeReport(value={}, solver={:?})", self.value, self.solver)
    }
}

impl From<chartime::CharTimeReport> for PyCharTime {
    fn from(r: chartime::CharTimeReport) -> Self {
        let solver = match r.solver {
            chartime::SolverKind::ClosedForm => "closed-form",
            chartime::SolverKind::WaterFill => "water-fill",
            chartime::SolverKind::MirrorAscent => "mirror-ascent",
            chartime::SolverKind::Grid => "grid",
        };
        Self {
            value: r.value,
            allocation: r.allocation.weights().to_vec(),
            solver: solver.to_string(),
            iterations: r.iterations,
            residual: r.residual,
        }
    }
}

fn parse_algorithm(name: &str) -> PyResult<Algorithm> {
    name.parse().map_err(to_py)
}

/// Runs one strategy to completion. The GIL is released while it runs.
#[pyfunction]
#[pyo3(signature = (algorithm, instance, *, epsilon=1.0, delta=0.01, beta=0.5, s=2.0, cap=1_000_000_000, clip=true, seed=0, stream=0))]
#[allow(clippy::too_many_arguments)]
fn run_algorithm(
    py: Python<'_>,
    algorithm: &str,
    instance: &PyBandit,
    epsilon: f64,
    delta: f64,
    beta: f64,
    s: f64,
    cap: u64,
    clip: bool,
    seed: u64,
    stream: u64,
) -> PyResult<PyRunResult> {
    let algorithm = parse_algorithm(algorithm)?;
    let config = RunConfig { delta, epsilon, beta, s, cap, clip };
    let inst = instance.inner.clone();
    let r = py
        .detach(move || run(algorithm, &inst, &config, &RngStream::new(seed, stream)))
        .map_err(to_py)?;
    Ok(PyRunResult {
        algorithm: r.algorithm.to_string(),
        stopping_time: r.stopping_time,
        recommended_arm: r.recommended_arm,
        correct: r.correct,
        seed: r.seed,
        stream: r.stream,
        counts: r.counts,
        capped: r.capped,
        seconds: r.duration.as_secs_f64(),
    })
}

#[pyfunction]
fn tv_char_time(instance: &PyBandit) -> PyResult<PyCharTime> {
    Ok(chartime::tv_char_time(&instance.inner).map_err(to_py)?.into())
}

#[pyfunction]
fn kl_char_time(instance: &PyBandit) -> PyResult<PyCharTime> {
    Ok(chartime::kl_char_time_bernoulli(&instance.inner, &MirrorAscentConfig::default())
        .map_err(to_py)?
        .into())
}

#[pyfunction]
fn private_char_time(instance: &PyBandit, epsilon: f64) -> PyResult<PyCharTime> {
    Ok(chartime::private_char_time(&instance.inner, epsilon, &MirrorAscentConfig::default())
        .map_err(to_py)?
        .into())
}

/// Gaussian `T*_{KL,β}` by water-filling on the instance's gaps.
#[pyfunction]
fn kl_beta_char_time_gaussian(instance: &PyBandit, beta: f64) -> PyResult<PyCharTime> {
    let g = gaps(&instance.inner).map_err(to_py)?;
    Ok(chartime::kl_beta_char_time_gaussian(&g, beta).map_err(to_py)?.into())
}

/// Brute-force lattice solver. `objective` is `"kl"`, `"tv"` or `"private"`
/// (the latter needs `epsilon`).
#[pyfunction]
#[pyo3(signature = (instance, objective="kl", epsilon=None, resolution=100))]
fn grid_oracle(
    py: Python<'_>,
    instance: &PyBandit,
    objective: &str,
    epsilon: Option<f64>,
    resolution: usize,
) -> PyResult<PyCharTime> {
    let objective = match (objective, epsilon) {
        ("kl", _) => OracleObjective::Kl,
        ("tv", _) => OracleObjective::Tv,
        ("private", Some(epsilon)) => OracleObjective::Private { epsilon },
        ("private", None) => return Err(PyValueError::new_err("private objective needs epsilon")),
        (other, _) => return Err(PyValueError::new_err(format!("unknown objective `{other}`"))),
    };
    let inst = instance.inner.clone();
    Ok(py
        .detach(move || chartime::grid_oracle(&inst, objective, resolution))
        .map_err(to_py)?
        .into())
}

#[pyfunction]
fn regime_boundary(instance: &PyBandit) -> PyResult<f64> {
    chartime::regime_boundary(&instance.inner).map_err(to_py)
}

#[pyfunction]
fn c_gaussian(x: f64) -> PyResult<f64> {
    threshold::c_gaussian(x).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (k, n, m, delta, arms, s=2.0))]
fn nonprivate_threshold(k: u64, n: u64, m: u64, delta: f64, arms: usize, s: f64) -> PyResult<f64> {
    let p = adaptt::ThresholdParams::new(s, arms).map_err(to_py)?;
    threshold::nonprivate_threshold(k, n, m, delta, &p).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (k1, k2, n, m, delta, epsilon, arms, s=2.0))]
#[allow(clippy::too_many_arguments)]
fn private_threshold(k1: u64, k2: u64, n: u64, m: u64, delta: f64, epsilon: f64, arms: usize, s: f64) -> PyResult<f64> {
    let p = adaptt::ThresholdParams::new(s, arms).map_err(to_py)?;
    threshold::private_threshold(k1, k2, n, m, delta, epsilon, &p).map_err(to_py)
}

/// Runs a sweep and returns one dict per (algorithm, ε) cell. With `out`,
/// also writes `runs.csv`, `summary.csv` and `summary.json` there.
#[pyfunction]
#[pyo3(signature = (instance, algorithms, epsilons, *, runs=100, seed=0, delta=0.01, beta=0.5, cap=1_000_000_000, out=None))]
#[allow(clippy::too_many_arguments)]
fn sweep<'py>(
    py: Python<'py>,
    instance: &str,
    algorithms: Vec<String>,
    epsilons: Vec<f64>,
    runs: usize,
    seed: u64,
    delta: f64,
    beta: f64,
    cap: u64,
    out: Option<std::path::PathBuf>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let (label, inst) = harness::resolve_instance(instance).map_err(to_py)?;
    let algorithms = algorithms.iter().map(|a| parse_algorithm(a)).collect::<PyResult<Vec<_>>>()?;
    let config = SweepConfig {
        algorithms,
        epsilons,
        runs,
        seed,
        delta,
        beta,
        cap,
        ..SweepConfig::new(label, &inst)
    };
    let summary = py
        .detach(move || -> adaptt::Result<_> {
            let records = harness::run_sweep(&config)?;
            let summary = harness::annotate_regimes(harness::summarize(&records)?, &inst)?;
            if let Some(dir) = out {
                harness::write_outputs(&dir, &config, &records, &summary)?;
            }
            Ok(summary)
        })
        .map_err(to_py)?;
    summary
        .cells
        .iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("algo", c.algo.name())?;
            d.set_item("instance", &c.instance)?;
            d.set_item("epsilon", c.epsilon)?;
            d.set_item("delta", c.delta)?;
            d.set_item("runs", c.runs)?;
            d.set_item("mean_tau", c.mean_tau)?;
            d.set_item("std_tau", c.std_tau)?;
            d.set_item("error_rate", c.error_rate)?;
            let regime = match c.regime {
                Some(harness::Regime::High) => Some("high"),
                Some(harness::Regime::Low) => Some("low"),
                None => None,
            };
            d.set_item("regime", regime)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn pyadaptt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBandit>()?;
    m.add_class::<PyRunResult>()?;
    m.add_class::<PyCharTime>()?;
    m.add_function(wrap_pyfunction!(run_algorithm, m)?)?;
    m.add_function(wrap_pyfunction!(tv_char_time, m)?)?;
    m.add_function(wrap_pyfunction!(kl_char_time, m)?)?;
    m.add_function(wrap_pyfunction!(private_char_time, m)?)?;
    m.add_function(wrap_pyfunction!(kl_beta_char_time_gaussian, m)?)?;
    m.add_function(wrap_pyfunction!(grid_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(regime_boundary, m)?)?;
    m.add_function(wrap_pyfunction!(c_gaussian, m)?)?;
    m.add_function(wrap_pyfunction!(nonprivate_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(private_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add("ALGORITHMS", Algorithm::ALL.iter().map(|a| a.name()).collect::<Vec<_>>())?;
    Ok(())
}
