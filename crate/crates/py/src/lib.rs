//! Python bindings.
//!
//! ```python
//! import cdnl
//! p = cdnl.Program("a :- not b. b :- not a.")
//! out = cdnl.solve(p, heuristic="lex")
//! out.status, out.model, out.stats.conflicts
//! ```

use std::time::Duration;

use cdnl::cli::parse_nogood_file;
use cdnl::oracle;
use cdnl::solve::{ConflictEvent, Observer, RestartPolicy, Solver, SolverConfig, Status};
use cdnl::{ConflictStats, Heuristic, Instance};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Program", module = "cdnl", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProgram {
    inner: cdnl::Program,
}

#[pymethods]
impl PyProgram {
    #[new]
    fn new(source: &str) -> PyResult<Self> {
        cdnl::parse_program(source).map(|inner| PyProgram { inner }).map_err(value_error)
    }

    /// Visible atom names in first-appearance order.
    #[getter]
    fn atoms(&self) -> Vec<String> {
        self.inner.atoms().iter().filter(|a| !a.hidden).map(|a| a.name.clone()).collect()
    }

    #[getter]
    fn num_rules(&self) -> usize {
        self.inner.rules().len()
    }

    #[getter]
    fn num_bodies(&self) -> usize {
        self.inner.num_bodies()
    }

    #[getter]
    fn is_tight(&self) -> bool {
        self.inner.is_tight()
    }

    /// All answer sets by brute force, each as sorted atom names.
    fn answer_sets(&self) -> PyResult<Vec<Vec<String>>> {
        let p = &self.inner;
        let mut sets: Vec<Vec<String>> = oracle::answer_sets(p)
            .map_err(value_error)?
            .into_iter()
            .map(|s| {
                let mut names: Vec<String> =
                    s.into_iter().filter(|&a| !p.atom(a).hidden).map(|a| p.atom(a).name.clone()).collect();
                names.sort();
                names
            })
            .collect();
        sets.sort();
        Ok(sets)
    }

    /// A copy with rule and body-literal order permuted.
    fn shuffle(&self, seed: u64) -> Self {
        PyProgram {
            inner: cdnl::bench::shuffle_instance(&self.inner, seed),
        }
    }

    /// The completion nogoods in nogood file format.
    fn nogoods(&self) -> String {
        Instance::from_program(self.inner.clone()).to_nogood_file()
    }

    fn __str__(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Program(<{} rules>)", self.inner.rules().len())
    }
}

#[pyclass(name = "Stats", module = "cdnl", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyStats {
    conflicts: u64,
    decisions: u64,
    propagations: u64,
    restarts: u64,
    loop_nogoods: u64,
    ufs_calls: u64,
    deleted: u64,
    avg_nogood_len: Option<f64>,
    avg_backjump: Option<f64>,
    avg_res_steps: Option<f64>,
    elapsed: f64,
}

impl From<&ConflictStats> for PyStats {
    fn from(s: &ConflictStats) -> Self {
        PyStats {
            conflicts: s.conflicts,
            decisions: s.decisions,
            propagations: s.propagations,
            restarts: s.restarts,
            loop_nogoods: s.loop_nogoods,
            ufs_calls: s.ufs_calls,
            deleted: s.deleted,
            avg_nogood_len: s.avg_nogood_len(),
            avg_backjump: s.avg_backjump_len(),
            avg_res_steps: s.avg_resolution_steps(),
            elapsed: s.elapsed,
        }
    }
}

#[pymethods]
impl PyStats {
    fn __repr__(&self) -> String {
        format!("Stats(conflicts={}, decisions={})", self.conflicts, self.decisions)
    }
}

/// One analyzed conflict.
#[pyclass(name = "Conflict", module = "cdnl", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyConflict {
    nogood: Vec<String>,
    backjump_level: u32,
    resolution_steps: usize,
    conflict_level: u32,
}

#[pymethods]
impl PyConflict {
    fn __repr__(&self) -> String {
        format!(
            "nogood={{{}}} k={} steps={}",
            self.nogood.join(", "),
            self.backjump_level,
            self.resolution_steps
        )
    }
}

#[pyclass(name = "Outcome", module = "cdnl", frozen, get_all)]
struct PyOutcome {
    /// `"SAT"`, `"UNSAT"` or `"UNKNOWN"`.
    status: String,
    model: Option<Vec<String>>,
    stats: PyStats,
    conflicts: Vec<PyConflict>,
}

#[pymethods]
impl PyOutcome {
    #[getter]
    fn satisfiable(&self) -> Option<bool> {
        match self.status.as_str() {
            "SAT" => Some(true),
            "UNSAT" => Some(false),
            _ => None,
        }
    }

    fn __repr__(&self) -> String {
        match &self.model {
            Some(m) => format!("Outcome(SAT, [{}])", m.join(", ")),
            None => format!("Outcome({})", self.status),
        }
    }
}

struct Recorder {
    names: Vec<String>,
    conflicts: Vec<PyConflict>,
}

impl Observer for Recorder {
    fn on_conflict(&mut self, c: &ConflictEvent<'_>) {
        let r = c.result;
        self.conflicts.push(PyConflict {
            nogood: r
                .nogood
                .iter()
                .map(|l| format!("{} {}", if l.sign() { 'T' } else { 'F' }, self.names[l.var().index()]))
                .collect(),
            backjump_level: r.backjump_level,
            resolution_steps: r.resolution_steps,
            conflict_level: r.conflict_level,
        });
    }
}

#[allow(clippy::too_many_arguments)]
fn run(
    py: Python<'_>,
    inst: Instance,
    heuristic: &str,
    script: Option<Vec<String>>,
    restarts: Option<(u64, f64)>,
    max_conflicts: Option<u64>,
    time_limit: Option<f64>,
) -> PyResult<PyOutcome> {
    let heuristic: Heuristic = heuristic.parse().map_err(value_error)?;
    let mut scripted = Vec::new();
    for s in script.unwrap_or_default() {
        scripted.push(
            inst.parse_lit(&s)
                .ok_or_else(|| PyValueError::new_err(format!("unknown scripted literal `{}`", s)))?,
        );
    }
    let cfg = SolverConfig {
        heuristic,
        restarts: match restarts {
            Some((base, factor)) => RestartPolicy::Geometric { base, factor },
            None => RestartPolicy::Off,
        },
        max_conflicts,
        time_limit: time_limit.map(Duration::from_secs_f64),
        scripted_decisions: scripted,
        ..Default::default()
    };
    let mut recorder = Recorder {
        names: inst.names().to_vec(),
        conflicts: Vec::new(),
    };
    let outcome = py.detach(|| {
        let mut solver = Solver::new(&inst, cfg);
        solver.set_observer(&mut recorder);
        solver.solve()
    });
    let outcome = outcome.map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let status = match outcome.status {
        Status::Sat(_) => "SAT",
        Status::Unsat => "UNSAT",
        Status::Unknown(_) => "UNKNOWN",
    };
    Ok(PyOutcome {
        status: status.to_string(),
        model: outcome.model_names(&inst),
        stats: PyStats::from(&outcome.stats),
        conflicts: recorder.conflicts,
    })
}

/// Searches for one answer set of `program`.
#[pyfunction]
#[pyo3(signature = (program, heuristic = "first", script = None, restarts = None, max_conflicts = None, time_limit = None))]
fn solve(
    py: Python<'_>,
    program: &PyProgram,
    heuristic: &str,
    script: Option<Vec<String>>,
    restarts: Option<(u64, f64)>,
    max_conflicts: Option<u64>,
    time_limit: Option<f64>,
) -> PyResult<PyOutcome> {
    let inst = Instance::from_program(program.inner.clone());
    run(py, inst, heuristic, script, restarts, max_conflicts, time_limit)
}

/// Searches for a solution of a nogood file (`vars:`, `nogood:`,
/// `decide:` lines).
#[pyfunction]
#[pyo3(signature = (source, heuristic = "first", script = None, restarts = None, max_conflicts = None, time_limit = None))]
fn solve_nogoods(
    py: Python<'_>,
    source: &str,
    heuristic: &str,
    script: Option<Vec<String>>,
    restarts: Option<(u64, f64)>,
    max_conflicts: Option<u64>,
    time_limit: Option<f64>,
) -> PyResult<PyOutcome> {
    let inst = parse_nogood_file(source).map_err(value_error)?;
    run(py, inst, heuristic, script, restarts, max_conflicts, time_limit)
}

#[pymodule]
#[pyo3(name = "cdnl")]
fn cdnl_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProgram>()?;
    m.add_class::<PyStats>()?;
    m.add_class::<PyConflict>()?;
    m.add_class::<PyOutcome>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(solve_nogoods, m)?)?;
    m.add("HEURISTICS", Heuristic::ALL.iter().map(|h| h.name()).collect::<Vec<_>>())?;
    Ok(())
}
