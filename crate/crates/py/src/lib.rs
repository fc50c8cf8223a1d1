//! Python bindings for `deuring-core`.
// pyo3 0.22 macro expansion trips this lint on every PyResult return.
#![allow(clippy::useless_conversion)]

use deuring_core::cli_table::{compute_record, OutputRecord};
use deuring_core::supersingular_curves::{render_j, supersingular_j_list};
use deuring_core::ternary_forms::{enumerate_classes, enumerate_reduced};
use deuring_core::{build_correspondence, Error, MatchOptions, TernaryForm};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e.root() {
        Error::Input(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Positive definite ternary form `a11 x² + a22 y² + a33 z² + a23 yz + a13 xz + a12 xy`.
#[pyclass(name = "TernaryForm", frozen, eq, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyTernaryForm(TernaryForm);

#[pymethods]
impl PyTernaryForm {
    #[new]
    fn new(a11: i64, a22: i64, a33: i64, a23: i64, a13: i64, a12: i64) -> Self {
        PyTernaryForm(TernaryForm::new(a11, a22, a33, a23, a13, a12))
    }

    fn coefficients(&self) -> (i64, i64, i64, i64, i64, i64) {
        let f = &self.0;
        (f.a11, f.a22, f.a33, f.a23, f.a13, f.a12)
    }

    fn evaluate(&self, x: [i64; 3]) -> i64 {
        self.0.evaluate(&x)
    }

    fn discriminant(&self) -> i64 {
        self.0.discriminant()
    }

    fn is_reduced(&self) -> bool {
        self.0.is_reduced()
    }

    fn representation_number(&self, n: i64) -> PyResult<usize> {
        self.0.representation_number(n).map_err(to_py)
    }

    fn theta_series(&self, up_to: i64) -> PyResult<Vec<usize>> {
        self.0.theta_series(up_to).map_err(to_py)
    }

    fn automorph_count(&self) -> PyResult<u32> {
        self.0.automorph_count().map_err(to_py)
    }

    fn equivalent(&self, other: &PyTernaryForm) -> PyResult<bool> {
        self.0.equivalent(&other.0).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("TernaryForm{}", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Reduced forms of discriminant `p`, one per reduced representative.
#[pyfunction]
fn reduced_forms(p: u64) -> PyResult<Vec<PyTernaryForm>> {
    Ok(enumerate_reduced(p)
        .map_err(to_py)?
        .into_iter()
        .map(PyTernaryForm)
        .collect())
}

/// Class representatives of discriminant `p` with their τ.
#[pyfunction]
fn form_classes(p: u64) -> PyResult<Vec<(PyTernaryForm, u32)>> {
    Ok(enumerate_classes(p)
        .map_err(to_py)?
        .into_iter()
        .map(|c| (PyTernaryForm(c.form), c.tau))
        .collect())
}

/// Supersingular j-invariants in characteristic `p`, grouped into Frobenius orbits.
#[pyfunction]
fn supersingular_j(p: u64) -> PyResult<Vec<Vec<String>>> {
    let list = supersingular_j_list(p).map_err(to_py)?;
    Ok(list
        .orbits
        .iter()
        .map(|o| o.members.iter().map(render_j).collect())
        .collect())
}

/// `(j, form, τ)` triples of the correspondence at `p`.
#[pyfunction]
#[pyo3(signature = (p, lambda_set=None, seed=0))]
fn correspondence(
    p: u64,
    lambda_set: Option<Vec<u64>>,
    seed: u64,
) -> PyResult<Vec<(String, PyTernaryForm, u32)>> {
    let opts = MatchOptions {
        lambda: lambda_set,
        seed,
    };
    let c = build_correspondence(p, &opts).map_err(to_py)?;
    Ok(c.entries
        .iter()
        .map(|e| (e.j_label.clone(), PyTernaryForm(e.form), e.tau))
        .collect())
}

/// The JSON record the command line tool prints for `p`.
#[pyfunction]
#[pyo3(signature = (p, seed=0, emit_orders=false, emit_fingerprints=false))]
fn record_json(p: u64, seed: u64, emit_orders: bool, emit_fingerprints: bool) -> PyResult<String> {
    let opts = MatchOptions { lambda: None, seed };
    let rec: OutputRecord =
        compute_record(p, &opts, emit_orders, emit_fingerprints).map_err(to_py)?;
    serde_json::to_string(&rec).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn deuring(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTernaryForm>()?;
    m.add_function(wrap_pyfunction!(reduced_forms, m)?)?;
    m.add_function(wrap_pyfunction!(form_classes, m)?)?;
    m.add_function(wrap_pyfunction!(supersingular_j, m)?)?;
    m.add_function(wrap_pyfunction!(correspondence, m)?)?;
    m.add_function(wrap_pyfunction!(record_json, m)?)?;
    Ok(())
}
