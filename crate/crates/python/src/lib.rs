//! Python bindings: tuples, radii, bound reports and verification suites.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use eoradius::bounds::{self, BoundConfig};
use eoradius::cli::TupleFile;
use eoradius::matfun::{CMatrix, SpectralFunctionPair, C64};
use eoradius::radii::{self, EuclideanRadiusConfig, NumericalRadiusConfig, OperatorTuple};
use eoradius::verify::{self, SuiteName};

fn err(e: eoradius::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix(rows: Vec<Vec<C64>>) -> PyResult<CMatrix> {
    CMatrix::from_rows(&rows).map_err(err)
}

fn radius_config(restarts: usize, seed: u64) -> EuclideanRadiusConfig {
    EuclideanRadiusConfig { restarts, ..EuclideanRadiusConfig::with_seed(seed) }
}

/// A d-tuple of square complex matrices of equal size.
///
/// ```python
/// t = Tuple([[[0, 1], [1, 0]], [[1, 0], [0, -1]]])
/// ```
#[pyclass(name = "Tuple", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTuple {
    inner: OperatorTuple,
}

#[pymethods]
impl PyTuple {
    #[new]
    fn new(matrices: Vec<Vec<Vec<C64>>>) -> PyResult<Self> {
        let mats = matrices.into_iter().map(matrix).collect::<PyResult<Vec<_>>>()?;
        Ok(Self { inner: OperatorTuple::new(mats).map_err(err)? })
    }

    #[staticmethod]
    fn pauli() -> Self {
        Self { inner: OperatorTuple::pauli() }
    }

    #[staticmethod]
    fn identity(d: usize, dim: usize) -> Self {
        Self { inner: OperatorTuple::identity(d, dim) }
    }

    /// Random Ginibre tuple, reproducible from `seed`.
    #[staticmethod]
    #[pyo3(signature = (d, dim, seed=42, scale=1.0))]
    fn random(d: usize, dim: usize, seed: u64, scale: f64) -> Self {
        Self { inner: verify::random_tuple(&mut eoradius::seed::rng(seed), d, dim, scale) }
    }

    /// Parses a tuple file (`{"d", "dim", "matrices": [[[re, im], ...]]}`).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = TupleFile::parse(text).and_then(|f| f.to_tuple()).map_err(err)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> String {
        TupleFile::from_tuple(&self.inner).to_json()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn matrices(&self) -> Vec<Vec<Vec<C64>>> {
        self.inner.iter().map(CMatrix::rows).collect()
    }

    /// `‖A‖ = sqrt(λ_max Σ A_k* A_k)`.
    fn norm(&self) -> f64 {
        radii::tuple_op_norm(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.d()
    }

    fn __repr__(&self) -> String {
        format!("Tuple(d={}, dim={})", self.inner.d(), self.inner.dim())
    }
}

#[pyclass(name = "RadiusEstimate", frozen, get_all)]
struct PyRadiusEstimate {
    value: f64,
    certified_lower: f64,
    restarts: usize,
    iterations: usize,
    method: String,
    argmax: Vec<C64>,
}

#[pymethods]
impl PyRadiusEstimate {
    fn __float__(&self) -> f64 {
        self.value
    }

    fn __repr__(&self) -> String {
        format!("RadiusEstimate(value={:.9}, method={:?})", self.value, self.method)
    }
}

impl From<radii::RadiusEstimate> for PyRadiusEstimate {
    fn from(r: radii::RadiusEstimate) -> Self {
        Self {
            value: r.value,
            certified_lower: r.certified_lower,
            restarts: r.restarts,
            iterations: r.iterations,
            method: r.method,
            argmax: r.argmax,
        }
    }
}

/// Euclidean operator radius. The value is attained at `argmax`, so it is a lower bound.
#[pyfunction]
#[pyo3(signature = (t, restarts=32, seed=42))]
fn euclidean_radius(py: Python<'_>, t: &PyTuple, restarts: usize, seed: u64) -> PyResult<PyRadiusEstimate> {
    let a = t.inner.clone();
    let r = py.detach(|| radii::euclidean_radius(&a, &radius_config(restarts, seed))).map_err(err)?;
    Ok(r.into())
}

#[pyfunction]
fn numerical_radius(m: Vec<Vec<C64>>) -> PyResult<PyRadiusEstimate> {
    let m = matrix(m)?;
    Ok(radii::numerical_radius(&m, &NumericalRadiusConfig::default()).map_err(err)?.into())
}

#[pyclass(name = "BoundReport", frozen, get_all)]
struct PyBoundReport {
    bound_id: String,
    value: f64,
    params: BTreeMap<String, f64>,
    components: BTreeMap<String, f64>,
    function_pair: Option<String>,
    anchor: String,
}

#[pymethods]
impl PyBoundReport {
    fn __repr__(&self) -> String {
        format!("BoundReport({}, value={:.9})", self.bound_id, self.value)
    }
}

/// Every single-tuple upper bound on `w_e(t)` at one `(t_param, alpha)`.
/// `fg` is `"sqrt"` or `"power:<alpha>"`.
#[pyfunction]
#[pyo3(signature = (t, t_param=0.5, alpha=0.5, fg="sqrt", seed=42))]
fn tuple_bounds(
    py: Python<'_>,
    t: &PyTuple,
    t_param: f64,
    alpha: f64,
    fg: &str,
    seed: u64,
) -> PyResult<Vec<PyBoundReport>> {
    let fg = SpectralFunctionPair::parse(fg).map_err(err)?;
    let a = t.inner.clone();
    let reports = py
        .detach(|| bounds::all_tuple_bounds(&a, t_param, alpha, &fg, &BoundConfig::with_seed(seed)))
        .map_err(err)?;
    Ok(reports
        .into_iter()
        .map(|r| PyBoundReport {
            bound_id: r.bound_id.name().to_string(),
            value: r.value,
            params: r.params,
            components: r.components,
            function_pair: r.function_pair,
            anchor: r.anchor,
        })
        .collect())
}

#[pyclass(name = "VerifyResult", frozen, get_all)]
struct PyVerifyResult {
    suite: String,
    trials: usize,
    record_count: usize,
    failures: usize,
    digest: String,
    /// `(bound_id, trial, trial_seed, lhs, rhs, slack, pass)` for every failing record.
    failing: Vec<(String, u64, u64, f64, f64, f64, bool)>,
    /// Per-bound `(count, failures, mean ratio, equality count)`.
    per_bound: BTreeMap<String, (usize, usize, f64, usize)>,
}

/// Runs a seeded verification suite (`lemmas`, `bounds`, `blockmat` or `all`).
#[pyfunction]
#[pyo3(signature = (suite="all", trials=100, seed=42))]
fn run_suite(py: Python<'_>, suite: &str, trials: usize, seed: u64) -> PyResult<PyVerifyResult> {
    let name: SuiteName = suite.parse().map_err(err)?;
    let records = py.detach(|| verify::run_named_suite(name, trials, seed)).map_err(err)?;
    let summary = verify::tightness_report(&records).map_err(err)?;
    Ok(PyVerifyResult {
        suite: name.to_string(),
        trials,
        record_count: records.len(),
        failures: records.iter().filter(|r| !r.pass).count(),
        digest: verify::records_digest(&records),
        failing: records
            .iter()
            .filter(|r| !r.pass)
            .map(|r| (r.bound_id.name().to_string(), r.trial, r.trial_seed, r.lhs, r.rhs, r.slack, r.pass))
            .collect(),
        per_bound: summary
            .per_bound
            .into_iter()
            .map(|(k, s)| (k, (s.count, s.failures, s.mean_ratio, s.equality_count)))
            .collect(),
    })
}

#[pymodule]
fn eoradius_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTuple>()?;
    m.add_class::<PyRadiusEstimate>()?;
    m.add_class::<PyBoundReport>()?;
    m.add_class::<PyVerifyResult>()?;
    m.add_function(wrap_pyfunction!(euclidean_radius, m)?)?;
    m.add_function(wrap_pyfunction!(numerical_radius, m)?)?;
    m.add_function(wrap_pyfunction!(tuple_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
