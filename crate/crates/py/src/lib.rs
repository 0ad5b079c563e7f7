//! Python bindings for the `ecbalance` estimation library.

use ecbalance::balancing::{self, EstimandKind};
use ecbalance::dataset::{self as ds, ColumnMap};
use ecbalance::error::ErrorCategory;
use ecbalance::estimators::EstimateResult;
use ecbalance::harness::{self, OracleTable, ReplicationOptions};
use ecbalance::psmodel::{self, FitOptions, ModelTerms};
use ecbalance::simgen::{self, ScenarioSpec};
use ecbalance::{oracle, CombinedDataset, SubjectRecord};
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: ecbalance::Error) -> PyErr {
    match e.category() {
        ErrorCategory::Data => PyValueError::new_err(e.to_string()),
        ErrorCategory::Model => PyRuntimeError::new_err(e.to_string()),
        ErrorCategory::Io => PyOSError::new_err(e.to_string()),
    }
}

fn kind(name: &str) -> PyResult<EstimandKind> {
    name.parse().map_err(to_py)
}

/// A validated RCT + external-control dataset.
#[pyclass(name = "Dataset", module = "ecbalance", frozen)]
struct PyDataset {
    inner: CombinedDataset,
}

#[pymethods]
impl PyDataset {
    /// Builds a dataset from parallel lists. `x` holds one covariate list per subject.
    #[new]
    #[pyo3(signature = (y, a, z, x, names=None))]
    fn new(y: Vec<f64>, a: Vec<bool>, z: Vec<bool>, x: Vec<Vec<f64>>, names: Option<Vec<String>>) -> PyResult<Self> {
        let n = y.len();
        if a.len() != n || z.len() != n || x.len() != n {
            return Err(PyValueError::new_err("y, a, z and x must have the same length"));
        }
        let p = x.first().map_or(0, Vec::len);
        let records: Vec<SubjectRecord> = y
            .into_iter()
            .zip(a)
            .zip(z)
            .zip(x)
            .map(|(((y, a), z), x)| SubjectRecord::new(y, a, z, x))
            .collect();
        let names = names.unwrap_or_else(|| (1..=p).map(|j| format!("x{j}")).collect());
        CombinedDataset::with_names(records, names)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    /// Reads a CSV file with `y`, `a`, `z` columns and covariates.
    #[staticmethod]
    #[pyo3(signature = (path, y="y", a="a", z="z", covariates=None, exclude=Vec::new()))]
    fn from_csv(
        path: &str,
        y: &str,
        a: &str,
        z: &str,
        covariates: Option<Vec<String>>,
        exclude: Vec<String>,
    ) -> PyResult<Self> {
        let columns = ColumnMap {
            y: y.into(),
            a: a.into(),
            z: z.into(),
            covariates,
            exclude,
        };
        ds::ingest_csv(path, &columns)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    fn to_csv(&self, path: &str) -> PyResult<()> {
        self.inner.export_csv(path).map_err(to_py)
    }

    #[getter]
    fn n11(&self) -> usize {
        self.inner.n11()
    }

    #[getter]
    fn n10(&self) -> usize {
        self.inner.n10()
    }

    #[getter]
    fn n2(&self) -> usize {
        self.inner.n2()
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.inner.lambda()
    }

    #[getter]
    fn covariate_names(&self) -> Vec<String> {
        self.inner.covariate_names().to_vec()
    }

    #[getter]
    fn y(&self) -> Vec<f64> {
        self.inner.records().iter().map(|r| r.y).collect()
    }

    #[getter]
    fn x(&self) -> Vec<Vec<f64>> {
        self.inner.records().iter().map(|r| r.x.clone()).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset(n11={}, n10={}, n2={}, p={})",
            self.inner.n11(),
            self.inner.n10(),
            self.inner.n2(),
            self.inner.dim()
        )
    }
}

#[pyclass(name = "PropensityFit", module = "ecbalance", frozen)]
struct PyPropensityFit {
    inner: psmodel::PropensityFit,
}

#[pymethods]
impl PyPropensityFit {
    #[getter]
    fn coefficients(&self) -> Vec<f64> {
        self.inner.coefficients.clone()
    }

    #[getter]
    fn term_labels(&self) -> Vec<String> {
        self.inner.term_labels.clone()
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations
    }

    #[getter]
    fn max_abs_score(&self) -> f64 {
        self.inner.max_abs_score
    }

    #[getter]
    fn pi_hat(&self) -> Vec<f64> {
        self.inner.pi_hat.clone()
    }

    fn predict(&self, x: Vec<f64>) -> PyResult<f64> {
        psmodel::predict_pi(&self.inner, &x).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "PropensityFit(coefficients={:?}, converged={}, iterations={})",
            self.inner.coefficients, self.inner.converged, self.inner.iterations
        )
    }
}

/// Logistic fit of `Pr(Z = 1 | X)`.
#[pyfunction]
#[pyo3(signature = (dataset, ridge=0.0, interactions=false, squares=false))]
fn fit_propensity(
    py: Python<'_>,
    dataset: &PyDataset,
    ridge: f64,
    interactions: bool,
    squares: bool,
) -> PyResult<PyPropensityFit> {
    let opts = FitOptions {
        ridge,
        terms: ModelTerms { interactions, squares },
        ..FitOptions::default()
    };
    let data = &dataset.inner;
    py.detach(|| psmodel::fit_propensity_with(data, &opts))
        .map(|inner| PyPropensityFit { inner })
        .map_err(to_py)
}

/// Balancing weights for `kind` (`"ati"`, `"att"`, `"ato"` or `"atec"`).
#[pyfunction]
fn weights_for<'py>(py: Python<'py>, kind: &str, dataset: &PyDataset, pi: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let ws = balancing::weights_for(self::kind(kind)?, &dataset.inner, &pi).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("kind", ws.kind.as_str())?;
    d.set_item("applied", ws.applied(&dataset.inner))?;
    d.set_item("w1", ws.w1)?;
    d.set_item("w0", ws.w0)?;
    d.set_item("ess_rct_treated", ws.ess_by_group.rct_treated)?;
    d.set_item("ess_rct_control", ws.ess_by_group.rct_control)?;
    d.set_item("ess_ec", ws.ess_by_group.ec)?;
    d.set_item("n_extreme", ws.n_extreme)?;
    Ok(d)
}

/// Kish effective sample size `(sum w)^2 / sum w^2`.
#[pyfunction]
fn effective_sample_size(weights: Vec<f64>) -> PyResult<f64> {
    balancing::effective_sample_size(&weights).map_err(to_py)
}

fn estimate_dict<'py>(py: Python<'py>, r: &EstimateResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kind", r.kind.as_str())?;
    d.set_item("tau_hat", r.tau_hat)?;
    d.set_item("term_treated", r.term_treated)?;
    d.set_item("term_cc", r.term_cc)?;
    d.set_item("term_ec", r.term_ec)?;
    d.set_item("blend", r.blend)?;
    d.set_item("ess_rct_treated", r.ess.rct_treated)?;
    d.set_item("ess_rct_control", r.ess.rct_control)?;
    d.set_item("ess_ec", r.ess.ec)?;
    d.set_item("n_extreme", r.n_extreme)?;
    Ok(d)
}

/// Weighted estimate of ATI, ATT or ATO with per-subject propensities `pi`.
#[pyfunction]
fn estimate<'py>(py: Python<'py>, dataset: &PyDataset, kind: &str, pi: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let r = ecbalance::estimate(&dataset.inner, self::kind(kind)?, &pi).map_err(to_py)?;
    estimate_dict(py, &r)
}

fn spec(setting: u32, ec: u32) -> PyResult<ScenarioSpec> {
    ScenarioSpec::from_table(setting, ec).map_err(to_py)
}

/// True propensity of covariates `x` under a tabulated scenario.
#[pyfunction]
fn true_pi(setting: u32, ec: u32, x: Vec<f64>) -> PyResult<f64> {
    if x.len() != 2 {
        return Err(PyValueError::new_err("x must be (x1, x2)"));
    }
    Ok(oracle::true_pi(&spec(setting, ec)?, &x))
}

/// Monte Carlo true estimands of a tabulated scenario.
#[pyfunction]
#[pyo3(signature = (setting, ec, n_mc=1_000_000, seed=42, lambda_=None))]
fn true_estimands<'py>(
    py: Python<'py>,
    setting: u32,
    ec: u32,
    n_mc: usize,
    seed: u64,
    lambda_: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let s = spec(setting, ec)?;
    let lambda = lambda_.unwrap_or_else(|| s.lambda());
    let t = py
        .detach(|| oracle::true_estimand_custom_lambda(&s, lambda, n_mc, seed))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("lambda", t.lambda)?;
    d.set_item("n_mc", t.n_mc)?;
    for k in EstimandKind::ALL {
        let name = k.as_str().to_ascii_lowercase();
        d.set_item(&name, t.value(k))?;
        d.set_item(format!("se_{name}"), t.std_error(k))?;
    }
    Ok(d)
}

/// One simulated dataset for a tabulated scenario.
#[pyfunction]
fn generate(setting: u32, ec: u32, seed: u64) -> PyResult<PyDataset> {
    simgen::generate(&spec(setting, ec)?, seed)
        .map(|inner| PyDataset { inner })
        .map_err(to_py)
}

fn ids(text: Option<&str>) -> PyResult<Option<Vec<u32>>> {
    text.map(|t| simgen::parse_id_list(t).map_err(to_py)).transpose()
}

/// Scenario parameters, optionally filtered by id lists such as `"1-9"`.
#[pyfunction]
#[pyo3(signature = (settings=None, ecs=None))]
fn enumerate_scenarios<'py>(
    py: Python<'py>,
    settings: Option<&str>,
    ecs: Option<&str>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let (settings, ecs) = (ids(settings)?, ids(ecs)?);
    let specs = simgen::enumerate_scenarios(settings.as_deref(), ecs.as_deref()).map_err(to_py)?;
    specs
        .iter()
        .map(|s| {
            let d = PyDict::new(py);
            d.set_item("setting", s.setting_id)?;
            d.set_item("ec", s.ec_id)?;
            d.set_item("n11", s.n11)?;
            d.set_item("n10", s.n10)?;
            d.set_item("n2", s.n2)?;
            d.set_item("phi1", s.phi1)?;
            d.set_item("phi2", s.phi2)?;
            d.set_item("ec_x2_mean", s.ec_x2_mean)?;
            d.set_item("ec_x2_sd", s.ec_x2_sd)?;
            d.set_item("lambda", s.lambda())?;
            Ok(d)
        })
        .collect()
}

/// Replicated simulation with bias and MSE per scenario and estimand.
#[pyfunction]
#[pyo3(signature = (settings="1-18", ecs="1-8", b=200, seed=42, n_mc=1_000_000))]
fn run_replications<'py>(
    py: Python<'py>,
    settings: &str,
    ecs: &str,
    b: usize,
    seed: u64,
    n_mc: usize,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let (settings, ecs) = (ids(Some(settings))?, ids(Some(ecs))?);
    let specs = simgen::enumerate_scenarios(settings.as_deref(), ecs.as_deref()).map_err(to_py)?;
    let opts = ReplicationOptions {
        replicates: b,
        master_seed: seed,
        fit: FitOptions::default(),
    };
    let table = py
        .detach(|| {
            let oracle = OracleTable::compute(&specs, n_mc, seed)?;
            harness::run_replications(&specs, &opts, &oracle)
        })
        .map_err(to_py)?;
    table
        .rows
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("setting", r.setting)?;
            d.set_item("ec", r.ec)?;
            d.set_item("estimand", r.estimand.as_str())?;
            d.set_item("true_value", r.true_value)?;
            d.set_item("mean_estimate", r.mean_estimate)?;
            d.set_item("bias", r.bias)?;
            d.set_item("mse", r.mse)?;
            d.set_item("variance", r.variance)?;
            d.set_item("mc_se_bias", r.mc_se_bias)?;
            d.set_item("b", r.b)?;
            d.set_item("failures", r.failures)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "ecbalance")]
fn ecbalance_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyDataset>()?;
    m.add_class::<PyPropensityFit>()?;
    m.add_function(wrap_pyfunction!(fit_propensity, m)?)?;
    m.add_function(wrap_pyfunction!(weights_for, m)?)?;
    m.add_function(wrap_pyfunction!(effective_sample_size, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(true_pi, m)?)?;
    m.add_function(wrap_pyfunction!(true_estimands, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_scenarios, m)?)?;
    m.add_function(wrap_pyfunction!(run_replications, m)?)?;
    Ok(())
}
