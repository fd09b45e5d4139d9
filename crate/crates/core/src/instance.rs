//! Demands, instances, routings and routing validation.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::crossing;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, RotationGraph, VertexId};

/// One demand class: `count` paths, each from some source to some sink.
///
/// Exempt classes model the complement "no-paths": they may cross anything,
/// anywhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemandClass {
    pub sources: Vec<VertexId>,
    pub sinks: Vec<VertexId>,
    pub count: u32,
    #[serde(default)]
    pub crossing_exempt: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl DemandClass {
    pub fn new(sources: Vec<VertexId>, sinks: Vec<VertexId>, count: u32) -> Self {
        let mut d = DemandClass { sources, sinks, count, crossing_exempt: false, label: None };
        d.sources.sort();
        d.sources.dedup();
        d.sinks.sort();
        d.sinks.dedup();
        d
    }

    pub fn exempt(mut self) -> Self {
        self.crossing_exempt = true;
        self
    }

    pub fn labelled(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn is_source(&self, v: VertexId) -> bool {
        self.sources.binary_search(&v).is_ok()
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.sinks.binary_search(&v).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub graph: RotationGraph,
    pub demands: Vec<DemandClass>,
}

impl Instance {
    pub fn new(graph: RotationGraph, demands: Vec<DemandClass>) -> Result<Self> {
        for (i, d) in demands.iter().enumerate() {
            if d.count == 0 {
                return Err(Error::Input(format!("demand class {i} has count 0")));
            }
            if d.sources.is_empty() || d.sinks.is_empty() {
                return Err(Error::Input(format!("demand class {i} has no sources or no sinks")));
            }
            if let Some(v) = d.sources.iter().chain(&d.sinks).find(|v| !graph.contains_vertex(**v)) {
                return Err(Error::Input(format!("demand class {i} names unknown vertex {}", v.0)));
            }
        }
        let demands = demands
            .into_iter()
            .map(|mut d| {
                d.sources.sort();
                d.sources.dedup();
                d.sinks.sort();
                d.sinks.dedup();
                d
            })
            .collect();
        Ok(Instance { graph, demands })
    }

    /// Resolves vertex names to a demand class.
    pub fn class_by_names(
        graph: &RotationGraph,
        sources: &[&str],
        sinks: &[&str],
        count: u32,
    ) -> Result<DemandClass> {
        let s = sources.iter().map(|n| graph.require(n)).collect::<Result<Vec<_>>>()?;
        let t = sinks.iter().map(|n| graph.require(n)).collect::<Result<Vec<_>>>()?;
        Ok(DemandClass::new(s, t, count))
    }

    pub fn total_paths(&self) -> u32 {
        self.demands.iter().map(|d| d.count).sum()
    }
}

/// A path: its class, its first vertex and its edges in traversal order.
///
/// The start vertex is stored explicitly because the edge sequence alone is
/// ambiguous for single edges and for back-to-back parallel edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RoutedPath {
    pub class: usize,
    pub start: VertexId,
    pub edges: Vec<EdgeId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Routing {
    pub paths: Vec<RoutedPath>,
}

impl Routing {
    pub fn new(paths: Vec<RoutedPath>) -> Self {
        Routing { paths }
    }

    /// Canonical form: paths sorted by class, then by edge sequence.
    pub fn canonical(&self) -> Routing {
        let mut paths = self.paths.clone();
        paths.sort_by(|a, b| (a.class, &a.edges, a.start).cmp(&(b.class, &b.edges, b.start)));
        Routing { paths }
    }

    pub fn used_edges(&self) -> Vec<EdgeId> {
        let mut v: Vec<EdgeId> = self.paths.iter().flat_map(|p| p.edges.iter().copied()).collect();
        v.sort();
        v
    }
}

/// Vertex sequence of a path (one more entry than edges). Fails when
/// consecutive edges do not share the expected vertex or an arc is walked
/// backwards.
pub fn path_vertices(g: &RotationGraph, path: &RoutedPath) -> Result<Vec<VertexId>> {
    if !g.contains_vertex(path.start) {
        return Err(Error::MalformedRouting(format!("unknown start vertex {}", path.start.0)));
    }
    let mut seq = Vec::with_capacity(path.edges.len() + 1);
    let mut cur = path.start;
    seq.push(cur);
    for (k, &e) in path.edges.iter().enumerate() {
        if !g.contains_edge(e) {
            return Err(Error::MalformedRouting(format!("unknown edge {}", e.0)));
        }
        let edge = g.edge(e);
        let next = if edge.tail == cur {
            edge.head
        } else if edge.head == cur && !g.is_directed() {
            edge.tail
        } else {
            return Err(Error::MalformedRouting(format!(
                "edge {} (step {k}) does not leave `{}`",
                e.0,
                g.name(cur)
            )));
        };
        cur = next;
        seq.push(cur);
    }
    Ok(seq)
}

pub fn path_end(g: &RotationGraph, path: &RoutedPath) -> Result<VertexId> {
    Ok(*path_vertices(g, path)?.last().unwrap())
}

/// Same path walked the other way round (undirected graphs only).
pub fn reversed(g: &RotationGraph, path: &RoutedPath) -> Result<RoutedPath> {
    let end = path_end(g, path)?;
    let mut edges = path.edges.clone();
    edges.reverse();
    Ok(RoutedPath { class: path.class, start: end, edges })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnknownClass { path: usize, class: usize },
    Malformed { path: usize, reason: String },
    EmptyPath { path: usize },
    RepeatedEdge { path: usize, edge: EdgeId },
    SharedEdge { edge: EdgeId, paths: (usize, usize) },
    BadEndpoints { path: usize, start: VertexId, end: VertexId },
    WrongCount { class: usize, expected: u32, found: u32 },
    Crossing { paths: (usize, usize), vertex: VertexId },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a routing against every condition of the extended problem.
///
/// Paths are edge sequences without repeated edges (vertex repetitions are
/// allowed). Crossings are reported only at non-crossing vertices and only
/// between two non-exempt paths.
pub fn validate_routing(inst: &Instance, routing: &Routing) -> ValidationReport {
    let g = &inst.graph;
    let mut violations = Vec::new();
    let mut owner: BTreeMap<EdgeId, usize> = BTreeMap::new();
    let mut counts = vec![0u32; inst.demands.len()];
    let mut well_formed = vec![false; routing.paths.len()];
    for (i, p) in routing.paths.iter().enumerate() {
        if p.class >= inst.demands.len() {
            violations.push(Violation::UnknownClass { path: i, class: p.class });
            continue;
        }
        counts[p.class] += 1;
        if p.edges.is_empty() {
            violations.push(Violation::EmptyPath { path: i });
            continue;
        }
        let seq = match path_vertices(g, p) {
            Ok(s) => s,
            Err(e) => {
                violations.push(Violation::Malformed { path: i, reason: e.to_string() });
                continue;
            }
        };
        well_formed[i] = true;
        let mut seen = HashSet::new();
        for &e in &p.edges {
            if !seen.insert(e) {
                violations.push(Violation::RepeatedEdge { path: i, edge: e });
                continue;
            }
            if let Some(&j) = owner.get(&e) {
                violations.push(Violation::SharedEdge { edge: e, paths: (j, i) });
            } else {
                owner.insert(e, i);
            }
        }
        let d = &inst.demands[p.class];
        let (s, t) = (seq[0], *seq.last().unwrap());
        if !d.is_source(s) || !d.is_sink(t) {
            violations.push(Violation::BadEndpoints { path: i, start: s, end: t });
        }
    }
    for (c, d) in inst.demands.iter().enumerate() {
        if counts[c] != d.count {
            violations.push(Violation::WrongCount { class: c, expected: d.count, found: counts[c] });
        }
    }
    let checked = |i: usize| well_formed[i] && !inst.demands[routing.paths[i].class].crossing_exempt;
    if let Ok(found) = crossing::crossings_filtered(g, &routing.paths, checked, true) {
        for c in found {
            violations.push(Violation::Crossing { paths: (c.path_a, c.path_b), vertex: c.vertex });
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    /// A path a-b-c and a single edge a-c.
    fn triangle() -> Instance {
        let mut b = GraphBuilder::new(false);
        let a = b.add_vertex("a", None);
        let m = b.add_vertex("m", None);
        let c = b.add_vertex("c", None);
        b.add_edge(a, m);
        b.add_edge(m, c);
        b.add_edge(a, c);
        let g = b.build().unwrap();
        let d = Instance::class_by_names(&g, &["a"], &["c"], 2).unwrap();
        Instance::new(g, vec![d]).unwrap()
    }

    #[test]
    fn accepts_a_valid_routing() {
        let inst = triangle();
        let r = Routing::new(vec![
            RoutedPath { class: 0, start: VertexId(0), edges: vec![EdgeId(0), EdgeId(1)] },
            RoutedPath { class: 0, start: VertexId(0), edges: vec![EdgeId(2)] },
        ]);
        assert!(validate_routing(&inst, &r).is_valid());
    }

    #[test]
    fn reports_shared_edges_and_counts() {
        let inst = triangle();
        let r = Routing::new(vec![
            RoutedPath { class: 0, start: VertexId(0), edges: vec![EdgeId(2)] },
            RoutedPath { class: 0, start: VertexId(0), edges: vec![EdgeId(2)] },
            RoutedPath { class: 0, start: VertexId(0), edges: vec![EdgeId(0), EdgeId(1)] },
        ]);
        let rep = validate_routing(&inst, &r);
        assert!(rep.violations.iter().any(|v| matches!(v, Violation::SharedEdge { .. })));
        assert!(rep.violations.iter().any(|v| matches!(v, Violation::WrongCount { found: 3, .. })));
    }

    #[test]
    fn reports_broken_paths() {
        let inst = triangle();
        let r = Routing::new(vec![
            RoutedPath { class: 0, start: VertexId(0), edges: vec![EdgeId(1)] },
            RoutedPath { class: 0, start: VertexId(0), edges: vec![EdgeId(2)] },
        ]);
        let rep = validate_routing(&inst, &r);
        assert!(matches!(rep.violations[0], Violation::Malformed { path: 0, .. }));
    }

    #[test]
    fn empty_demand_is_routed_by_empty_routing() {
        let inst = Instance::new(triangle().graph, vec![]).unwrap();
        assert!(validate_routing(&inst, &Routing::default()).is_valid());
    }

    #[test]
    fn rejects_bad_demands() {
        let g = triangle().graph;
        assert!(Instance::new(g.clone(), vec![DemandClass::new(vec![VertexId(0)], vec![VertexId(2)], 0)]).is_err());
        assert!(Instance::new(g.clone(), vec![DemandClass::new(vec![], vec![VertexId(2)], 1)]).is_err());
        assert!(Instance::new(g, vec![DemandClass::new(vec![VertexId(9)], vec![VertexId(2)], 1)]).is_err());
    }
}
