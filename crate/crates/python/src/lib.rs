//! Python bindings: build catalog groups, detect their class and run the
//! full analysis, with reports returned as JSON text.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use dgroup::catalog::{self, ENTRIES};
use dgroup::classifier::{analyze, AnalyzeOptions};
use dgroup::group::group_from_cycles;
use dgroup::regular::detect;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A permutation group given by generators on points `1..=degree`.
#[pyclass(name = "Group", module = "pydgroup", frozen)]
pub struct PyGroup {
    inner: dgroup::GroupHandle,
    name: String,
}

#[pymethods]
impl PyGroup {
    /// Generators are written in 1-based cycle notation, e.g. `"(1 2 3)(4 5)"`.
    #[new]
    #[pyo3(signature = (degree, generators, name = "input"))]
    fn new(degree: usize, generators: Vec<String>, name: &str) -> PyResult<Self> {
        let gens: Vec<&str> = generators.iter().map(String::as_str).collect();
        let inner = group_from_cycles(degree, &gens).map_err(value_error)?;
        Ok(Self { inner, name: name.to_string() })
    }

    /// Parses the `degree:` / `gen:` group file format.
    #[staticmethod]
    #[pyo3(signature = (text, name = "input"))]
    fn from_group_file(text: &str, name: &str) -> PyResult<Self> {
        let inner = dgroup::GroupHandle::from_group_file(text).map_err(value_error)?;
        Ok(Self { inner, name: name.to_string() })
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn name(&self) -> &str {
        &self.name
    }

    fn order(&self) -> u128 {
        self.inner.order()
    }

    fn generators(&self) -> Vec<String> {
        self.inner.generators().iter().map(ToString::to_string).collect()
    }

    fn is_transitive(&self) -> bool {
        dgroup::actions::is_transitive(&self.inner)
    }

    /// One of `"c-group"`, `"d-group"`, `"both"`, `"neither"`.
    fn classify(&self) -> PyResult<&'static str> {
        let caps = dgroup::classifier::Caps::default();
        Ok(detect(&self.inner, caps.order).map_err(value_error)?.class.label())
    }

    /// The analysis report as pretty-printed JSON.
    fn analyze(&self) -> PyResult<String> {
        let report = analyze(&self.inner, &self.name, &AnalyzeOptions::default()).map_err(value_error)?;
        serde_json::to_string_pretty(&report).map_err(value_error)
    }

    /// Human-readable one-screen summary of the analysis.
    fn summary(&self) -> PyResult<String> {
        let report = analyze(&self.inner, &self.name, &AnalyzeOptions::default()).map_err(value_error)?;
        Ok(report.summary())
    }

    fn to_group_file(&self) -> String {
        self.inner.to_group_file()
    }

    fn __repr__(&self) -> String {
        format!("Group(name={:?}, degree={}, order={})", self.name, self.inner.degree(), self.inner.order())
    }
}

#[pyfunction]
fn catalog_ids() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.id).collect()
}

/// Builds a catalog entry; missing parameters take their defaults.
#[pyfunction]
#[pyo3(signature = (id, params = None))]
fn build(id: &str, params: Option<BTreeMap<String, u64>>) -> PyResult<PyGroup> {
    let entry = catalog::build(id, &params.unwrap_or_default()).map_err(value_error)?;
    Ok(PyGroup {
        name: entry.label(),
        inner: entry.group,
    })
}

#[pymodule]
fn pydgroup(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_function(wrap_pyfunction!(catalog_ids, m)?)?;
    m.add_function(wrap_pyfunction!(build, m)?)?;
    Ok(())
}
