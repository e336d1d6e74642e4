//! Python bindings: `import pysphdesign`.

use std::collections::BTreeMap;
use std::time::Duration;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use spherical_designs::compose;
use spherical_designs::design::{default_tolerance, DesignMatrix};
use spherical_designs::error::Error;
use spherical_designs::format::{self, Format};
use spherical_designs::harmonic::{self, VerificationReport};
use spherical_designs::planner::{self, Status};
use spherical_designs::regular;
use spherical_designs::sidon::{self, SearchBudget, SidonSet};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Points on S^d stored as the columns of a (d+1) x n matrix.
#[pyclass(name = "Design", module = "pysphdesign", frozen)]
struct PyDesign {
    inner: DesignMatrix,
}

#[pymethods]
impl PyDesign {
    /// Builds a design from its points.
    #[new]
    #[pyo3(signature = (points, strength=3))]
    fn new(points: Vec<Vec<f64>>, strength: u32) -> PyResult<Self> {
        Ok(PyDesign {
            inner: DesignMatrix::from_columns(&points, strength).map_err(err)?,
        })
    }

    /// Parses the text or JSON file format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyDesign {
            inner: format::parse(text).map_err(err)?,
        })
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn strength(&self) -> u32 {
        self.inner.strength()
    }

    #[getter]
    fn provenance(&self) -> Option<String> {
        self.inner.provenance().map(str::to_owned)
    }

    /// The points, one list of d+1 coordinates each.
    fn points(&self) -> Vec<Vec<f64>> {
        self.inner.columns().collect()
    }

    /// The d+1 coordinate rows.
    fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.inner.rows())
            .map(|i| self.inner.row(i).to_vec())
            .collect()
    }

    fn to_text(&self) -> String {
        format::render(&self.inner, Format::Text)
    }

    fn to_json(&self) -> String {
        format::render(&self.inner, Format::Json)
    }

    /// Harmonic-basis check; defaults are the claimed strength and 1e-9 * n.
    #[pyo3(signature = (strength=None, tol=None))]
    fn verify(&self, strength: Option<u32>, tol: Option<f64>) -> PyResult<PyReport> {
        let t = strength.unwrap_or(self.inner.strength());
        let tol = tol.unwrap_or_else(|| default_tolerance(self.inner.size()));
        Ok(PyReport {
            inner: harmonic::verify_design(&self.inner, t, tol).map_err(err)?,
        })
    }

    /// Monomial moment check with the same defaults as `verify`.
    #[pyo3(signature = (strength=None, tol=None))]
    fn moment_check(&self, strength: Option<u32>, tol: Option<f64>) -> PyResult<PyReport> {
        let t = strength.unwrap_or(self.inner.strength());
        let tol = tol.unwrap_or_else(|| default_tolerance(self.inner.size()));
        Ok(PyReport {
            inner: harmonic::moment_check(&self.inner, t, tol).map_err(err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    fn __repr__(&self) -> String {
        format!(
            "Design(d={}, n={}, t={}, recipe={:?})",
            self.inner.dimension(),
            self.inner.size(),
            self.inner.strength(),
            self.inner.provenance().unwrap_or("none")
        )
    }
}

#[pyclass(name = "Report", module = "pysphdesign", frozen)]
struct PyReport {
    inner: VerificationReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed
    }

    #[getter]
    fn strength(&self) -> u32 {
        self.inner.strength
    }

    #[getter]
    fn tolerance(&self) -> f64 {
        self.inner.tolerance
    }

    #[getter]
    fn max_residual(&self) -> f64 {
        self.inner.max_residual()
    }

    #[getter]
    fn residual_by_degree(&self) -> BTreeMap<u32, f64> {
        self.inner.max_residual_by_degree.clone()
    }

    #[getter]
    fn norm_max_deviation(&self) -> f64 {
        self.inner.norm_max_deviation
    }

    #[getter]
    fn worst_polynomial(&self) -> Option<String> {
        self.inner.worst_polynomial.clone()
    }

    fn __bool__(&self) -> bool {
        self.inner.passed
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(passed={}, strength={}, max_residual={:.3e})",
            self.inner.passed,
            self.inner.strength,
            self.inner.max_residual()
        )
    }
}

#[pyclass(name = "SearchResult", module = "pysphdesign", frozen, get_all)]
struct PySearchResult {
    modulus: u64,
    strength: u32,
    max_cardinality: usize,
    witness: Vec<u64>,
    nodes_explored: u64,
    matches_lower_bound: bool,
    complete: bool,
}

#[pymethods]
impl PySearchResult {
    fn __repr__(&self) -> String {
        format!(
            "SearchResult(n={}, t={}, size={}, witness={:?}, complete={})",
            self.modulus, self.strength, self.max_cardinality, self.witness, self.complete
        )
    }
}

fn wrap(u: DesignMatrix) -> PyDesign {
    PyDesign { inner: u }
}

/// Builds and verifies a 3-design of size n on S^d.
#[pyfunction]
fn build(d: usize, n: usize) -> PyResult<PyDesign> {
    planner::build(d, n).map(wrap).map_err(err)
}

/// The recipe the planner would use, as a string.
#[pyfunction]
fn plan(d: usize, n: usize) -> PyResult<String> {
    planner::plan(d, n).map(|r| r.to_string()).map_err(err)
}

/// `(status, reason)` with status one of "infeasible", "constructible", "open".
#[pyfunction]
fn classify(d: usize, n: usize) -> (String, String) {
    let f = planner::classify(d, n);
    let status = match f.status {
        Status::ProvenInfeasible => "infeasible",
        Status::Constructible => "constructible",
        Status::Open => "open",
    };
    (status.to_owned(), f.reason)
}

#[pyfunction]
fn dgs_bound(d: usize, t: u32) -> u128 {
    planner::dgs_bound(d, t)
}

#[pyfunction]
fn conjectured_m_prime(d: usize) -> usize {
    planner::conjectured_m_prime(d)
}

/// Rows `(d, N, sizes)` of the table of constructible sizes.
#[pyfunction]
fn results_table(d_max: usize) -> Vec<(usize, usize, String)> {
    planner::results_table(d_max)
        .into_iter()
        .map(|r| (r.d, r.bound, r.sizes))
        .collect()
}

#[pyfunction]
fn octahedron(d: usize) -> PyResult<PyDesign> {
    compose::octahedron(d).map(wrap).map_err(err)
}

#[pyfunction]
fn polygon(n: usize) -> PyResult<PyDesign> {
    compose::polygon(n).map(wrap).map_err(err)
}

#[pyfunction]
fn double_antipodal(a: &PyDesign) -> PyResult<PyDesign> {
    compose::double_antipodal(&a.inner).map(wrap).map_err(err)
}

#[pyfunction]
fn lift_3_3(a: &PyDesign) -> PyResult<PyDesign> {
    compose::lift_3_3(&a.inner).map(wrap).map_err(err)
}

#[pyfunction]
fn merge_6_1(a: &PyDesign, c: &PyDesign, d1: usize, d2: usize) -> PyResult<PyDesign> {
    compose::merge_6_1(&a.inner, &c.inner, d1, d2)
        .map(wrap)
        .map_err(err)
}

#[pyfunction]
fn merge_6_3(a: &PyDesign, c: &PyDesign, d1: usize, d2: usize) -> PyResult<PyDesign> {
    compose::merge_6_3(&a.inner, &c.inner, d1, d2)
        .map(wrap)
        .map_err(err)
}

/// Regular design from a Sidon-type set of the given strength mod n.
#[pyfunction]
#[pyo3(signature = (elements, n, strength=3))]
fn build_regular(elements: Vec<u64>, n: u64, strength: u32) -> PyResult<PyDesign> {
    let set = SidonSet::new(elements, n, strength).map_err(err)?;
    regular::build_regular(&set, strength)
        .map(wrap)
        .map_err(err)
}

/// Whether no non-trivial signed sum of at most t elements vanishes mod n.
#[pyfunction]
#[pyo3(signature = (elements, n, t=3))]
fn is_sidon(elements: Vec<u64>, n: u64, t: u32) -> PyResult<bool> {
    Ok(sidon::is_sidon(&elements, n, t).map_err(err)?.holds())
}

#[pyfunction]
#[pyo3(signature = (n, t=3))]
fn lower_bound_size(n: u64, t: u32) -> PyResult<usize> {
    sidon::lower_bound_size(n, t).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, t=3))]
fn construct_bound_set(n: u64, t: u32) -> PyResult<Vec<u64>> {
    Ok(sidon::construct_bound_set(n, t)
        .map_err(err)?
        .elements()
        .to_vec())
}

/// Exhaustive search for s(n, t). With a budget the result may be
/// incomplete; check `complete`.
#[pyfunction]
#[pyo3(signature = (n, t=3, max_nodes=None, time_limit=None))]
fn max_sidon_search(
    py: Python<'_>,
    n: u64,
    t: u32,
    max_nodes: Option<u64>,
    time_limit: Option<f64>,
) -> PyResult<PySearchResult> {
    let budget = SearchBudget {
        max_nodes,
        time_limit: time_limit.map(Duration::from_secs_f64),
    };
    let r = py
        .detach(|| sidon::max_sidon_search(n, t, budget))
        .map_err(err)?;
    Ok(PySearchResult {
        modulus: r.modulus,
        strength: r.strength,
        max_cardinality: r.max_cardinality,
        witness: r.witness.elements().to_vec(),
        nodes_explored: r.nodes_explored,
        matches_lower_bound: r.matches_lower_bound,
        complete: r.complete,
    })
}

#[pyfunction]
fn harm_dim(d: usize, s: u32) -> PyResult<u64> {
    harmonic::harm_dim(d, s).map_err(err)
}

/// Labels of the harmonic basis polynomials of degree s in d+1 variables.
#[pyfunction]
fn phi_basis(d: usize, s: u32) -> PyResult<Vec<String>> {
    Ok(harmonic::phi_basis(d, s)
        .map_err(err)?
        .iter()
        .map(ToString::to_string)
        .collect())
}

#[pymodule]
fn pysphdesign(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDesign>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PySearchResult>()?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    m.add_function(wrap_pyfunction!(plan, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(dgs_bound, m)?)?;
    m.add_function(wrap_pyfunction!(conjectured_m_prime, m)?)?;
    m.add_function(wrap_pyfunction!(results_table, m)?)?;
    m.add_function(wrap_pyfunction!(octahedron, m)?)?;
    m.add_function(wrap_pyfunction!(polygon, m)?)?;
    m.add_function(wrap_pyfunction!(double_antipodal, m)?)?;
    m.add_function(wrap_pyfunction!(lift_3_3, m)?)?;
    m.add_function(wrap_pyfunction!(merge_6_1, m)?)?;
    m.add_function(wrap_pyfunction!(merge_6_3, m)?)?;
    m.add_function(wrap_pyfunction!(build_regular, m)?)?;
    m.add_function(wrap_pyfunction!(is_sidon, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound_size, m)?)?;
    m.add_function(wrap_pyfunction!(construct_bound_set, m)?)?;
    m.add_function(wrap_pyfunction!(max_sidon_search, m)?)?;
    m.add_function(wrap_pyfunction!(harm_dim, m)?)?;
    m.add_function(wrap_pyfunction!(phi_basis, m)?)?;
    Ok(())
}
