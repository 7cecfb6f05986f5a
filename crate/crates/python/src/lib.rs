//! Python bindings: build a designer from problem text and drive sessions.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use setlp::engine::{DesignConfig, Designer};
use setlp::io::parse_problem;
use setlp::poly::{Projection, ProjectionStrategy};
use setlp::problem::Problem;
use setlp::session::{Adjustment, DesignSession, EventLog, SessionMeta, Status};

create_exception!(setlp_py, SetlpError, PyException);
create_exception!(setlp_py, OutsideOptionsError, SetlpError);
create_exception!(setlp_py, NoOptimizersError, SetlpError);

fn to_py(e: setlp::Error) -> PyErr {
    let message = e.to_string();
    match e {
        setlp::Error::OutsideOptions { .. } => OutsideOptionsError::new_err(message),
        setlp::Error::NoOptimizers => NoOptimizersError::new_err(message),
        _ => SetlpError::new_err(message),
    }
}

fn geometry<'py>(py: Python<'py>, p: &Projection) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("vertices", p.vrep.points.clone())?;
    d.set_item("rays", p.vrep.rays.clone())?;
    d.set_item("lines", p.vrep.lines.clone())?;
    Ok(d)
}

/// A problem prepared for optimizer design.
#[pyclass(name = "Designer", frozen)]
struct PyDesigner {
    inner: Arc<Designer>,
    problem: Problem,
}

#[pymethods]
impl PyDesigner {
    /// `tiebreak` is "cost" (minimize the model's cost vector, if any) or "none".
    #[new]
    #[pyo3(signature = (text, tiebreak = "cost", strategy = "auto", tol = 1e-6))]
    fn new(text: &str, tiebreak: &str, strategy: &str, tol: f64) -> PyResult<Self> {
        let use_cost = match tiebreak {
            "cost" => true,
            "none" => false,
            other => return Err(PyValueError::new_err(format!("unknown tiebreak '{other}'"))),
        };
        let strategy: ProjectionStrategy = strategy.parse().map_err(to_py)?;
        let problem = parse_problem(text).map_err(to_py)?;
        let mut config = DesignConfig {
            membership_tol: tol,
            face_tol: tol,
            tiebreak: problem.tiebreak(use_cost),
            ..DesignConfig::default()
        };
        config.projection.strategy = strategy;
        let inner = Designer::new(problem.map.clone(), config).map_err(to_py)?;
        Ok(Self {
            inner: Arc::new(inner),
            problem,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.map().n()
    }

    #[getter]
    fn q(&self) -> usize {
        self.inner.map().q()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.problem.labels.clone()
    }

    #[getter]
    fn optimizers_exist(&self) -> bool {
        self.inner.optimizers_exist()
    }

    fn optimal_value<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        geometry(py, self.inner.optimal_value())
    }

    /// Options left after committing to `points`.
    fn value_function<'py>(&self, py: Python<'py>, points: Vec<Vec<f64>>) -> PyResult<Bound<'py, PyDict>> {
        let v = self.inner.value_function(&points).map_err(to_py)?;
        geometry(py, &v.projection)
    }

    /// A decision whose value equals the options left by `points`, or `None`.
    fn stop_test(&self, points: Vec<Vec<f64>>) -> PyResult<Option<Vec<f64>>> {
        let v = self.inner.value_function(&points).map_err(to_py)?;
        Ok(self.inner.stop_test(&v).map_err(to_py)?.optimizer().map(<[f64]>::to_vec))
    }

    fn optimizer_test(&self, x: Vec<f64>) -> PyResult<bool> {
        self.inner.optimizer_test(&x).map_err(to_py)
    }

    #[pyo3(signature = (problem_ref = ""))]
    fn session(&self, problem_ref: &str) -> PyResult<PySession> {
        let meta = SessionMeta {
            problem_ref: problem_ref.to_string(),
            labels: self.problem.labels.clone(),
            report_total: self.problem.report_total,
        };
        let inner = DesignSession::create(self.inner.clone(), meta).map_err(to_py)?;
        Ok(PySession { inner })
    }

    /// Rebuilds a session from an exported log.
    fn replay(&self, log: &str) -> PyResult<PySession> {
        let parsed = EventLog::parse(log).map_err(to_py)?;
        let meta = SessionMeta {
            problem_ref: parsed.problem.clone().unwrap_or_default(),
            labels: self.problem.labels.clone(),
            report_total: self.problem.report_total,
        };
        let inner = DesignSession::replay(self.inner.clone(), meta, &parsed).map_err(to_py)?;
        Ok(PySession { inner })
    }
}

#[pyclass(name = "Session")]
struct PySession {
    inner: DesignSession,
}

#[pymethods]
impl PySession {
    /// Returns a dict with `id`, `point`, `adjustment`, `distance` and `qualified`.
    #[pyo3(signature = (point, snap = false))]
    fn add_point<'py>(&mut self, py: Python<'py>, point: Vec<f64>, snap: bool) -> PyResult<Bound<'py, PyDict>> {
        let r = self.inner.add_point(&point, snap).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("id", r.id)?;
        d.set_item("requested", r.requested)?;
        d.set_item("point", r.point)?;
        let (kind, distance) = match r.adjustment {
            Adjustment::None => ("none", None),
            Adjustment::Candidate => ("candidate", None),
            Adjustment::Nearest { distance } => ("nearest", Some(distance)),
        };
        d.set_item("adjustment", kind)?;
        d.set_item("distance", distance)?;
        d.set_item("qualified", r.qualified)?;
        Ok(d)
    }

    fn remove_point(&mut self, id: u64) -> PyResult<()> {
        self.inner.remove_point(id).map_err(to_py)
    }

    #[getter]
    fn status(&self) -> &'static str {
        match self.inner.status() {
            Status::Searching => "searching",
            Status::Found => "found",
        }
    }

    #[getter]
    fn optimizer(&self) -> Option<Vec<f64>> {
        self.inner.outcome().optimizer().map(<[f64]>::to_vec)
    }

    #[getter]
    fn selections(&self) -> Vec<(u64, Vec<f64>)> {
        self.inner.selections().iter().map(|s| (s.id, s.point.clone())).collect()
    }

    /// Qualified candidate faces as `(point, lineality)` pairs.
    #[getter]
    fn candidates(&self) -> Vec<(Vec<f64>, Vec<Vec<f64>>)> {
        self.inner
            .candidates()
            .iter()
            .map(|f| (f.point.clone(), f.lineality.clone()))
            .collect()
    }

    fn options<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        geometry(py, &self.inner.current().projection)
    }

    /// The drawing payload served by the HTTP API, as JSON text.
    fn view_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.view()).map_err(|e| SetlpError::new_err(e.to_string()))
    }

    fn export_log(&self) -> String {
        self.inner.export_log()
    }
}

#[pymodule]
fn setlp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDesigner>()?;
    m.add_class::<PySession>()?;
    m.add("SetlpError", m.py().get_type::<SetlpError>())?;
    m.add("OutsideOptionsError", m.py().get_type::<OutsideOptionsError>())?;
    m.add("NoOptimizersError", m.py().get_type::<NoOptimizersError>())?;
    Ok(())
}
