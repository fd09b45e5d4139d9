//! Python bindings. Structured results cross the boundary as JSON and are
//! handed to Python as plain dicts and lists.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use hardpaths::cnf::CnfFormula;
use hardpaths::gadgets::{standard, GadgetKind};
use hardpaths::harness::{self, HarnessConfig, Profile};
use hardpaths::io::{self, DotOptions, InstanceDocument, RoutingDocument};
use hardpaths::reduction::{directed, undirected};
use hardpaths::solver::{self, Engine, Mode, SearchPolicy};
use hardpaths::{validate_routing, Error, Routing};

fn err(e: Error) -> PyErr {
    match e {
        Error::Input(_) | Error::Parse { .. } | Error::Precondition(_) | Error::MalformedRouting(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = io::to_json(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_routing(text: &str) -> PyResult<Routing> {
    // Accept a routing document or a bare routing.
    match io::parse_routing_document(text) {
        Ok(doc) => Ok(doc.routing),
        Err(_) => io::from_json(text).map_err(err),
    }
}

/// A CNF formula with 1-based variables.
#[pyclass(name = "Formula", module = "hardpaths_py", frozen)]
struct PyFormula {
    inner: CnfFormula,
}

#[pymethods]
impl PyFormula {
    #[new]
    fn new(num_vars: u32, clauses: Vec<Vec<i32>>) -> PyResult<Self> {
        Ok(PyFormula { inner: CnfFormula::new(num_vars, clauses).map_err(err)? })
    }

    #[staticmethod]
    fn from_dimacs(text: &str) -> PyResult<Self> {
        Ok(PyFormula { inner: io::parse_dimacs(text).map_err(err)? })
    }

    #[getter]
    fn num_vars(&self) -> u32 {
        self.inner.num_vars
    }

    #[getter]
    fn clauses(&self) -> Vec<Vec<i32>> {
        self.inner.clauses.clone()
    }

    fn to_dimacs(&self) -> String {
        self.inner.to_dimacs()
    }

    fn eval(&self, assignment: Vec<bool>) -> PyResult<bool> {
        if assignment.len() != self.inner.num_vars as usize {
            return Err(PyValueError::new_err("one value per variable is required"));
        }
        Ok(self.inner.eval(&assignment))
    }

    fn is_satisfiable(&self) -> bool {
        self.inner.is_satisfiable()
    }

    fn satisfying_assignments(&self) -> Vec<Vec<bool>> {
        self.inner.satisfying_assignments()
    }

    fn __repr__(&self) -> String {
        format!("Formula(num_vars={}, clauses={:?})", self.inner.num_vars, self.inner.clauses)
    }
}

/// A disjoint-paths instance, optionally with layout metadata.
#[pyclass(name = "Instance", module = "hardpaths_py", frozen)]
struct PyInstance {
    doc: InstanceDocument,
    inner: hardpaths::Instance,
}

impl PyInstance {
    fn from_doc(doc: InstanceDocument) -> PyResult<Self> {
        let inner = doc.instance().map_err(err)?;
        Ok(PyInstance { doc, inner })
    }
}

#[pymethods]
impl PyInstance {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        PyInstance::from_doc(io::parse_instance_document(text).map_err(err)?)
    }

    fn to_json(&self) -> PyResult<String> {
        io::to_json(&self.doc).map_err(err)
    }

    #[getter]
    fn directed(&self) -> bool {
        self.inner.graph.is_directed()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.graph.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.graph.edge_count()
    }

    #[getter]
    fn demand_counts(&self) -> Vec<u32> {
        self.inner.demands.iter().map(|d| d.count).collect()
    }

    /// Layout metadata as a dict, or None.
    fn layout<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.doc.layout)
    }

    /// Runs the solver. `budget` counts search nodes (conflicts for the
    /// `sat` engine) and defaults to HARDPATHS_BUDGET or the built-in value.
    #[pyo3(signature = (mode="witness", budget=None, engine="backtrack", threads=1, pruning=true))]
    fn solve<'py>(
        &self,
        py: Python<'py>,
        mode: &str,
        budget: Option<u64>,
        engine: &str,
        threads: usize,
        pruning: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let mode = match mode {
            "decide" => Mode::Decide,
            "witness" => Mode::Witness,
            "enumerate" => Mode::Enumerate,
            _ => return Err(PyValueError::new_err("mode is decide, witness or enumerate")),
        };
        let engine = match engine {
            "backtrack" => Engine::Backtrack,
            "sat" => Engine::Sat,
            _ => return Err(PyValueError::new_err("engine is backtrack or sat")),
        };
        let budget = match budget {
            Some(b) => b,
            None => solver::budget_from_env().map_err(err)?.unwrap_or(solver::DEFAULT_BUDGET),
        };
        let policy =
            SearchPolicy::new(mode).budget(budget).engine(engine).threads(threads.max(1)).pruning(pruning);
        let cuts = self.doc.cut_set(&self.inner).map_err(err)?;
        let inst = &self.inner;
        let res = py.detach(|| solver::solve_with_cuts(inst, &policy, &cuts)).map_err(err)?;
        to_py(py, &res)
    }

    /// Checks a routing given as JSON (a routing document or a bare routing).
    fn validate<'py>(&self, py: Python<'py>, routing_json: &str) -> PyResult<Bound<'py, PyAny>> {
        let r = parse_routing(routing_json)?;
        to_py(py, &validate_routing(&self.inner, &r))
    }

    #[pyo3(signature = (routing_json=None, clusters=false))]
    fn to_dot(&self, routing_json: Option<&str>, clusters: bool) -> PyResult<String> {
        let mut opts = DotOptions { mark_crossing: true, ..Default::default() };
        if let Some(meta) = &self.doc.layout {
            opts.name = meta.kind.clone();
            if clusters {
                opts.cells = meta.cells.clone();
            }
        }
        if let Some(t) = routing_json {
            opts.routing = Some(parse_routing(t)?);
        }
        Ok(io::export_dot(&self.inner.graph, &opts))
    }
}

fn routing_json(r: &Routing, g: &hardpaths::RotationGraph) -> PyResult<String> {
    io::to_json(&RoutingDocument::new(r).with_walks(g).map_err(err)?).map_err(err)
}

/// A compiled planar undirected reduction.
#[pyclass(name = "UndirectedReduction", module = "hardpaths_py", frozen)]
struct PyUndirected {
    formula: CnfFormula,
    inner: undirected::Compiled,
}

#[pymethods]
impl PyUndirected {
    fn instance(&self) -> PyResult<PyInstance> {
        PyInstance::from_doc(InstanceDocument::new(&self.inner.instance, None))
    }

    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &undirected::stats(&self.inner))
    }

    fn structure<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let rep = py.detach(|| undirected::validate_structure(&self.inner, &self.formula)).map_err(err)?;
        to_py(py, &rep)
    }

    /// The witness routing for a satisfying assignment, as JSON.
    fn witness(&self, py: Python<'_>, assignment: Vec<bool>) -> PyResult<String> {
        let r = py.detach(|| undirected::witness(&self.inner, &self.formula, &assignment)).map_err(err)?;
        routing_json(&r, &self.inner.instance.graph)
    }
}

/// A compiled acyclic directed reduction.
#[pyclass(name = "DirectedReduction", module = "hardpaths_py", frozen)]
struct PyDirected {
    formula: CnfFormula,
    inner: directed::DirectedCompiled,
}

#[pymethods]
impl PyDirected {
    fn instance(&self) -> PyResult<PyInstance> {
        PyInstance::from_doc(InstanceDocument::new(&self.inner.instance, None))
    }

    /// The form with `t1` merged into `s2` and `t2` into `s1`.
    fn identified(&self) -> PyResult<PyInstance> {
        let id = directed::identify_terminals(&self.inner).map_err(err)?;
        PyInstance::from_doc(InstanceDocument::new(&id.instance, None))
    }

    /// The form with wrap arcs and a single column path.
    fn corollary(&self) -> PyResult<PyInstance> {
        let w = directed::corollary_transform(&self.inner).map_err(err)?;
        PyInstance::from_doc(InstanceDocument::new(&w.instance, None))
    }

    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &directed::directed_stats(&self.inner))
    }

    fn structure<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &directed::validate_directed(&self.inner).map_err(err)?)
    }

    fn witness(&self, py: Python<'_>, assignment: Vec<bool>) -> PyResult<String> {
        let r = py
            .detach(|| directed::witness_directed(&self.inner, &self.formula, &assignment))
            .map_err(err)?;
        routing_json(&r, &self.inner.instance.graph)
    }
}

#[pyfunction]
#[pyo3(signature = (formula, relaxed=false))]
fn compile_undirected(py: Python<'_>, formula: &PyFormula, relaxed: bool) -> PyResult<PyUndirected> {
    let f = formula.inner.clone();
    let inner = py
        .detach(|| undirected::compile(&f, undirected::CompileOptions { relaxed }))
        .map_err(err)?;
    Ok(PyUndirected { formula: f, inner })
}

#[pyfunction]
fn compile_directed(py: Python<'_>, formula: &PyFormula) -> PyResult<PyDirected> {
    let f = formula.inner.clone();
    let inner = py.detach(|| directed::compile_full(&f)).map_err(err)?;
    Ok(PyDirected { formula: f, inner })
}

/// DOT text of a standard gadget, ports drawn as boxes.
#[pyfunction]
fn gadget_dot(kind: &str) -> PyResult<String> {
    let kind: GadgetKind = kind.parse().map_err(err)?;
    let gd = standard(kind);
    let opts = DotOptions {
        name: kind.to_string(),
        mark_crossing: true,
        highlight: gd.ports.values().copied().collect(),
        ..Default::default()
    };
    Ok(io::export_dot(&gd.graph, &opts))
}

#[pyfunction]
fn case_ids() -> Vec<&'static str> {
    harness::CASE_IDS.to_vec()
}

fn harness_config(profile: &str, budget: Option<u64>) -> PyResult<HarnessConfig> {
    let profile: Profile = profile.parse().map_err(err)?;
    let mut cfg = HarnessConfig { profile, ..Default::default() };
    if let Some(b) = budget.or(solver::budget_from_env().map_err(err)?) {
        cfg.budget = b;
    }
    Ok(cfg)
}

/// Runs harness cases (all of them when `ids` is None) and returns the
/// summary as a dict.
#[pyfunction]
#[pyo3(signature = (ids=None, profile="full", budget=None))]
fn verify<'py>(
    py: Python<'py>,
    ids: Option<Vec<String>>,
    profile: &str,
    budget: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = harness_config(profile, budget)?;
    let ids: Vec<String> = ids.unwrap_or_else(|| harness::CASE_IDS.iter().map(|s| s.to_string()).collect());
    if let Some(bad) = ids.iter().find(|id| !harness::CASE_IDS.contains(&id.as_str())) {
        return Err(PyValueError::new_err(format!("unknown case `{bad}`")));
    }
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    let summary = py.detach(|| harness::run_selected(&refs, &cfg)).map_err(err)?;
    to_py(py, &summary)
}

#[pymodule]
fn hardpaths_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFormula>()?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PyUndirected>()?;
    m.add_class::<PyDirected>()?;
    m.add_function(wrap_pyfunction!(compile_undirected, m)?)?;
    m.add_function(wrap_pyfunction!(compile_directed, m)?)?;
    m.add_function(wrap_pyfunction!(gadget_dot, m)?)?;
    m.add_function(wrap_pyfunction!(case_ids, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("FORMAT_VERSION", io::FORMAT_VERSION)?;
    Ok(())
}
