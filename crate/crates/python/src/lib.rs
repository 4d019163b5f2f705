//! Python bindings. Every function returns a JSON string so callers can
//! use `json.loads` and stay independent of the Rust types.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use hecke_core::clifford_lab::{builtin_catalog, CatalogFile};
use hecke_core::padic_groups::{gl3_counterexample, DEFAULT_BRUTE_FORCE_CAP};
use hecke_core::root_datum::RootDatum;
use hecke_core::torus_center::torus_center_report;
use hecke_core::{iwahori_hecke, suites, HeckeError};

fn to_py(e: HeckeError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn dump<T: Serialize>(value: hecke_core::Result<T>) -> PyResult<String> {
    let value = value.map_err(to_py)?;
    Ok(serde_json::to_string(&value).expect("serializable"))
}

fn catalog(text: Option<&str>) -> hecke_core::Result<CatalogFile> {
    text.map_or_else(|| Ok(builtin_catalog()), CatalogFile::from_json)
}

/// Roots, coroots and simple roots of a named or JSON-described datum.
#[pyfunction]
fn root_datum(datum: &str) -> PyResult<String> {
    dump(RootDatum::named(datum))
}

/// The GL_3 counterexample: bound matrices, volumes and the obstruction.
#[pyfunction]
fn counterexample() -> PyResult<String> {
    dump(gl3_counterexample())
}

/// Center of the Iwahori-Hecke algebra on the box of the given radius.
#[pyfunction]
#[pyo3(signature = (datum, radius=1))]
fn satake_check(py: Python<'_>, datum: &str, radius: i64) -> PyResult<String> {
    let datum = RootDatum::named(datum).map_err(to_py)?;
    py.allow_threads(|| dump(iwahori_hecke::satake_check(&datum, radius)))
}

/// Orbit sums of (λ, χ) pairs for the depth-one torus center.
#[pyfunction]
#[pyo3(signature = (datum, q, radius=1))]
fn torus_center(py: Python<'_>, datum: &str, q: u64, radius: i64) -> PyResult<String> {
    let datum = RootDatum::named(datum).map_err(to_py)?;
    py.allow_threads(|| dump(torus_center_report(&datum, q, radius)))
}

/// Clifford checks on a catalog given as JSON text, or the builtin one.
#[pyfunction]
#[pyo3(signature = (catalog_json=None))]
fn clifford(py: Python<'_>, catalog_json: Option<&str>) -> PyResult<String> {
    let cat = catalog(catalog_json).map_err(to_py)?;
    py.allow_threads(|| dump(suites::clifford_suite(&cat)))
}

/// Every verification suite; a list of reports.
#[pyfunction]
#[pyo3(signature = (catalog_json=None, spade_cap=DEFAULT_BRUTE_FORCE_CAP))]
fn verify_all(py: Python<'_>, catalog_json: Option<&str>, spade_cap: u64) -> PyResult<String> {
    let cat = catalog(catalog_json).map_err(to_py)?;
    py.allow_threads(|| dump(suites::verify_all(&cat, spade_cap)))
}

#[pymodule]
fn hecke(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(root_datum, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(satake_check, m)?)?;
    m.add_function(wrap_pyfunction!(torus_center, m)?)?;
    m.add_function(wrap_pyfunction!(clifford, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
