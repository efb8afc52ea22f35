use clap::ValueEnum;
use loghen_core::cli::{self, Mode, Route, Suite};
use loghen_core::invariant::InvariantEngine;
use loghen_core::mtrace::{pairing_table, TraceTable};
use loghen_core::tangle::{ClosurePresentation, Convention, Role};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: loghen_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: ValueEnum>(s: &str, what: &str) -> PyResult<T> {
    T::from_str(s, true).map_err(|_| PyValueError::new_err(format!("unknown {what}: {s}")))
}

fn convention(s: &str) -> PyResult<Convention> {
    s.parse().map_err(err)
}

fn role(s: &str) -> PyResult<Role> {
    match s {
        "plus" => Ok(Role::Plus),
        "surgery" => Ok(Role::Surgery),
        "minus" => Ok(Role::Minus),
        _ => Err(PyValueError::new_err(format!("unknown role: {s}"))),
    }
}

// JSON values cross the boundary as Python objects via the json module.
fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

/// Runs verification suites at level `p`; returns the report document.
#[pyfunction]
#[pyo3(signature = (p, suites = vec!["all".to_string()], convention = "A"))]
fn verify<'py>(py: Python<'py>, p: u32, suites: Vec<String>, convention: &str) -> PyResult<Bound<'py, PyAny>> {
    if p < 2 {
        return Err(PyValueError::new_err("p must be at least 2"));
    }
    let suites = suites.iter().map(|s| parse::<Suite>(s, "suite")).collect::<PyResult<Vec<_>>>()?;
    let conv = self::convention(convention)?;
    let (doc, _) = py.detach(|| cli::cmd_verify(p, &suites, conv)).map_err(err)?;
    to_py(py, &doc)
}

/// Evaluates an invariant of a presentation given as JSON text.
#[pyfunction]
#[pyo3(signature = (presentation, p = None, mode = "hlog", route = "character", convention = "A"))]
fn invariant<'py>(
    py: Python<'py>,
    presentation: &str,
    p: Option<u32>,
    mode: &str,
    route: &str,
    convention: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let mode = parse::<Mode>(mode, "mode")?;
    let route = parse::<Route>(route, "route")?;
    let conv = self::convention(convention)?;
    let v = py.detach(|| cli::cmd_invariant(presentation, p, mode, route, conv)).map_err(err)?;
    to_py(py, &v)
}

/// Trace values and pairing matrix at level `p`.
#[pyfunction]
fn tables(py: Python<'_>, p: u32) -> PyResult<Bound<'_, PyAny>> {
    let v = py.detach(|| cli::cmd_tables(p)).map_err(err)?;
    to_py(py, &v)
}

/// Closed-form modified trace values.
#[pyfunction]
fn trace_table(py: Python<'_>, p: u32) -> PyResult<Bound<'_, PyAny>> {
    let t = TraceTable::closed_form(p).map_err(err)?;
    to_py(py, &t.to_json())
}

#[pyfunction]
#[pyo3(name = "pairing_table")]
fn pairing(py: Python<'_>, p: u32) -> PyResult<Bound<'_, PyAny>> {
    let t = py.detach(|| pairing_table(p)).map_err(err)?;
    to_py(py, &t.to_json())
}

#[pyclass(name = "Presentation", frozen)]
struct PyPresentation {
    inner: ClosurePresentation,
}

#[pymethods]
impl PyPresentation {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = ClosurePresentation::from_json(text).map_err(err)?;
        inner.validate().map_err(err)?;
        Ok(PyPresentation { inner })
    }

    /// Braid closure with one component per cycle, all in the same role.
    #[staticmethod]
    #[pyo3(signature = (strands, word, role = "surgery"))]
    fn closure(strands: usize, word: Vec<i64>, role: &str) -> PyResult<Self> {
        let inner = ClosurePresentation::closure(strands, &word, self::role(role)?).map_err(err)?;
        Ok(PyPresentation { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn hash(&self) -> String {
        self.inner.hash()
    }

    fn component_count(&self) -> PyResult<usize> {
        Ok(self.inner.validate().map_err(err)?.component_count())
    }

    fn linking_matrix(&self) -> PyResult<Vec<Vec<i64>>> {
        Ok(self.inner.validate().map_err(err)?.linking_matrix())
    }

    fn writhes(&self) -> PyResult<Vec<i64>> {
        Ok(self.inner.validate().map_err(err)?.writhes())
    }

    fn surgery_signature(&self) -> PyResult<i64> {
        Ok(self.inner.validate().map_err(err)?.surgery_signature())
    }

    fn __repr__(&self) -> String {
        format!("Presentation(strands={}, word={:?})", self.inner.strands, self.inner.word)
    }
}

#[pyclass(name = "Engine", frozen)]
struct PyEngine {
    inner: InvariantEngine,
    p: u32,
}

#[pymethods]
impl PyEngine {
    #[new]
    #[pyo3(signature = (p, convention = "A"))]
    fn new(py: Python<'_>, p: u32, convention: &str) -> PyResult<Self> {
        let conv = self::convention(convention)?;
        let inner = py.detach(|| InvariantEngine::new(p, conv)).map_err(err)?;
        Ok(PyEngine { inner, p })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.p
    }

    #[pyo3(signature = (presentation, route = "character"))]
    fn h_log<'py>(&self, py: Python<'py>, presentation: &PyPresentation, route: &str) -> PyResult<Bound<'py, PyAny>> {
        let route = match parse::<Route>(route, "route")? {
            Route::Character => loghen_core::mtrace::PairingRoute::Character,
            Route::Partial => loghen_core::mtrace::PairingRoute::RightPartial,
        };
        let v = py
            .detach(|| {
                let input = self.inner.input(&presentation.inner)?;
                self.inner.h_log_with(&input, route)
            })
            .map_err(err)?;
        to_py(py, &v.to_json())
    }

    fn hennings<'py>(&self, py: Python<'py>, presentation: &PyPresentation) -> PyResult<Bound<'py, PyAny>> {
        let v = py.detach(|| self.inner.hennings(&self.inner.input(&presentation.inner)?)).map_err(err)?;
        to_py(py, &v.to_json())
    }

    fn j_log<'py>(&self, py: Python<'py>, presentation: &PyPresentation) -> PyResult<Bound<'py, PyAny>> {
        let v = py.detach(|| self.inner.j_log(&self.inner.input(&presentation.inner)?)).map_err(err)?;
        to_py(py, &v.to_json())
    }

    /// True when the coefficient relations between the logarithmic and
    /// non-semisimple values hold.
    fn coefficient_relations(&self, py: Python<'_>, presentation: &PyPresentation) -> PyResult<bool> {
        let rep = py.detach(|| self.inner.coefficient_relations(&self.inner.input(&presentation.inner)?)).map_err(err)?;
        Ok(rep.passed())
    }
}

#[pymodule]
fn loghen(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(invariant, m)?)?;
    m.add_function(wrap_pyfunction!(tables, m)?)?;
    m.add_function(wrap_pyfunction!(trace_table, m)?)?;
    m.add_function(wrap_pyfunction!(pairing, m)?)?;
    m.add_class::<PyPresentation>()?;
    m.add_class::<PyEngine>()?;
    Ok(())
}
