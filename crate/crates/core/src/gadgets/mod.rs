//! The nine gadgets: undirected XCH and LIC, directed YES, NO, ON, IF, LL,
//! TT and VV.
//!
//! Each gadget is built from a literal table (see [`tables`]) and validated:
//! ports are degree-1 stubs, XCH/LIC interiors are 4-regular, directed
//! gadgets are acyclic. Rotations are the counterclockwise order of edge
//! directions in the drawing coordinates.

pub mod figures;
pub mod tables;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, RotationGraph, VertexId};
pub use tables::{GadgetTable, Sides};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GadgetKind {
    Xch,
    Lic,
    Yes,
    No,
    On,
    If,
    Ll,
    Tt,
    Vv,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 9] = [
        GadgetKind::Xch,
        GadgetKind::Lic,
        GadgetKind::Yes,
        GadgetKind::No,
        GadgetKind::On,
        GadgetKind::If,
        GadgetKind::Ll,
        GadgetKind::Tt,
        GadgetKind::Vv,
    ];

    pub fn is_directed(self) -> bool {
        !matches!(self, GadgetKind::Xch | GadgetKind::Lic)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GadgetKind::Xch => "XCH",
            GadgetKind::Lic => "LIC",
            GadgetKind::Yes => "YES",
            GadgetKind::No => "NO",
            GadgetKind::On => "ON",
            GadgetKind::If => "IF",
            GadgetKind::Ll => "LL",
            GadgetKind::Tt => "TT",
            GadgetKind::Vv => "VV",
        }
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GadgetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GadgetKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Input(format!("unknown gadget kind `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub graph: RotationGraph,
    pub ports: BTreeMap<String, VertexId>,
    pub sides: Sides,
}

impl Gadget {
    pub fn port(&self, name: &str) -> Result<VertexId> {
        self.ports
            .get(name)
            .copied()
            .ok_or_else(|| Error::Input(format!("{} has no port `{name}`", self.kind)))
    }

    pub fn is_port(&self, v: VertexId) -> bool {
        self.ports.values().any(|&p| p == v)
    }

    /// Vertices that are not ports.
    pub fn interior(&self) -> Vec<VertexId> {
        self.graph.vertices().filter(|&v| !self.is_port(v)).collect()
    }

    /// Vertices where paths may cross (interior, outside the non-crossing set).
    pub fn crossing_vertices(&self) -> Vec<VertexId> {
        if self.kind.is_directed() {
            return Vec::new();
        }
        self.interior().into_iter().filter(|&v| !self.graph.is_noncrossing(v)).collect()
    }

    /// The left-right reflection of the drawing as a vertex permutation.
    pub fn mirror(&self) -> Result<HashMap<VertexId, VertexId>> {
        mirror_map(&self.graph)
    }
}

/// Vertex permutation induced by reflecting the drawing about its vertical
/// axis. Fails if the drawing is not left-right symmetric.
pub fn mirror_map(g: &RotationGraph) -> Result<HashMap<VertexId, VertexId>> {
    let pts: Vec<(f64, f64)> = g
        .vertices()
        .map(|v| g.position(v).ok_or_else(|| Error::Input("vertex without position".into())))
        .collect::<Result<_>>()?;
    let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let mut map = HashMap::new();
    for v in g.vertices() {
        let (x, y) = pts[v.index()];
        let target = (lo + hi - x, y);
        let w = g
            .vertices()
            .find(|w| {
                let p = pts[w.index()];
                (p.0 - target.0).abs() < 1e-9 && (p.1 - target.1).abs() < 1e-9
            })
            .ok_or_else(|| Error::Precondition(format!("`{}` has no mirror image", g.name(v))))?;
        map.insert(v, w);
    }
    Ok(map)
}

fn internal_name(p: tables::Pt) -> String {
    format!("v{}_{}", p.0, p.1)
}

/// Builds and validates a gadget from a table.
pub fn build_from_table(t: &GadgetTable) -> Result<Gadget> {
    let directed = t.kind.is_directed();
    let mut b = GraphBuilder::new(directed);
    let mut at: HashMap<tables::Pt, usize> = HashMap::new();
    for (name, p) in &t.named {
        if at.contains_key(p) {
            return Err(Error::Construction(format!("two vertices at {p:?}")));
        }
        let v = b.add_vertex(name, Some((p.0 as f64, p.1 as f64)));
        b.set_label(v, Some(format!("({},{})", p.0, p.1)));
        at.insert(*p, v);
    }
    for &(p, q) in &t.edges {
        let mut end = |pt: tables::Pt, b: &mut GraphBuilder| -> Result<usize> {
            if let Some(&v) = at.get(&pt) {
                return Ok(v);
            }
            if !directed {
                return Err(Error::Construction(format!("{}: unnamed vertex at {pt:?}", t.kind)));
            }
            let v = b.add_vertex(&internal_name(pt), Some((pt.0 as f64, pt.1 as f64)));
            b.set_label(v, Some(format!("({},{})", pt.0, pt.1)));
            at.insert(pt, v);
            Ok(v)
        };
        let u = end(p, &mut b)?;
        let w = end(q, &mut b)?;
        b.add_edge(u, w);
    }
    b.sort_rotations_geometric();
    let port_names: Vec<&String> =
        t.sides.top.iter().chain(&t.sides.bottom).chain(&t.sides.left).chain(&t.sides.right).collect();
    if !directed {
        for v in 0..b.vertex_count() {
            let is_port = port_names.iter().any(|n| *n == b.name(v));
            let crossing = t.crossing.iter().any(|n| n == b.name(v));
            b.set_noncrossing(v, !is_port && !crossing);
        }
    }
    let graph = b.build()?;
    let mut ports = BTreeMap::new();
    for name in &port_names {
        let v = graph.require(name)?;
        if graph.degree(v) != 1 {
            return Err(Error::Construction(format!(
                "{}: port `{name}` has degree {}",
                t.kind,
                graph.degree(v)
            )));
        }
        if ports.insert(name.to_string(), v).is_some() {
            return Err(Error::Construction(format!("{}: duplicate port `{name}`", t.kind)));
        }
    }
    let gadget = Gadget { kind: t.kind, graph, ports, sides: t.sides.clone() };
    check_invariants(&gadget, t)?;
    Ok(gadget)
}

fn check_invariants(gd: &Gadget, t: &GadgetTable) -> Result<()> {
    let g = &gd.graph;
    for v in g.vertices() {
        if g.degree(v) == 0 {
            return Err(Error::Construction(format!("{}: isolated vertex `{}`", gd.kind, g.name(v))));
        }
    }
    if gd.kind.is_directed() {
        if !g.is_acyclic() {
            return Err(Error::Construction(format!("{} is not acyclic", gd.kind)));
        }
        return Ok(());
    }
    for v in gd.interior() {
        if g.degree(v) != 4 {
            return Err(Error::Construction(format!(
                "{}: interior vertex `{}` has degree {}",
                gd.kind,
                g.name(v),
                g.degree(v)
            )));
        }
    }
    for name in &t.crossing {
        let v = g.require(name)?;
        if gd.is_port(v) {
            return Err(Error::Construction(format!("{}: port `{name}` marked crossing", gd.kind)));
        }
    }
    let expected = match gd.kind {
        GadgetKind::Xch => 4,
        _ => 6,
    };
    let found = gd.crossing_vertices().len();
    if found != expected {
        return Err(Error::Construction(format!("{}: {found} crossing vertices, expected {expected}", gd.kind)));
    }
    Ok(())
}

/// The standard gadget of a kind. The standard tables are validated by the
/// test suite, so this cannot fail.
pub fn build_gadget(kind: GadgetKind) -> Gadget {
    standard(kind).clone()
}

/// Shared, lazily built standard gadget.
pub fn standard(kind: GadgetKind) -> &'static Gadget {
    static CACHE: OnceLock<Vec<Gadget>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        GadgetKind::ALL
            .iter()
            .map(|&k| build_from_table(&tables::table(k)).expect("standard gadget tables are valid"))
            .collect()
    });
    &all[GadgetKind::ALL.iter().position(|&k| k == kind).unwrap()]
}

/// A complete set of gadget tables with their build results. The lemma
/// harness and the grid builder take their gadgets from a set, so that
/// altered tables can be substituted wholesale.
#[derive(Clone, Debug)]
pub struct GadgetSet {
    tables: Vec<GadgetTable>,
    built: Vec<Result<Gadget>>,
}

impl GadgetSet {
    pub fn standard() -> Self {
        Self::from_tables(GadgetKind::ALL.iter().map(|&k| tables::table(k)).collect())
    }

    /// One table per kind, in [`GadgetKind::ALL`] order.
    pub fn from_tables(tables: Vec<GadgetTable>) -> Self {
        let built = tables.iter().map(build_from_table).collect();
        GadgetSet { tables, built }
    }

    pub fn tables(&self) -> &[GadgetTable] {
        &self.tables
    }

    pub fn get(&self, kind: GadgetKind) -> Result<&Gadget> {
        let i = self
            .tables
            .iter()
            .position(|t| t.kind == kind)
            .ok_or_else(|| Error::Input(format!("no table for {kind}")))?;
        self.built[i].as_ref().map_err(|e| e.clone())
    }
}

impl Default for GadgetSet {
    fn default() -> Self {
        Self::standard()
    }
}

/// Whether a directed path joins two named ports of an isolated gadget.
pub fn gadget_reachability(kind: GadgetKind, from: &str, to: &str) -> Result<bool> {
    reachable_in(standard(kind), from, to)
}

pub fn reachable_in(gd: &Gadget, from: &str, to: &str) -> Result<bool> {
    let s = gd.port(from)?;
    let t = gd.port(to)?;
    let g = &gd.graph;
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([s]);
    seen[s.index()] = true;
    while let Some(v) = queue.pop_front() {
        if v == t {
            return Ok(true);
        }
        for e in g.leaving(v) {
            let w = g.edge(e).other(v);
            if !seen[w.index()] {
                seen[w.index()] = true;
                queue.push_back(w);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_standard_tables_build() {
        for k in GadgetKind::ALL {
            build_from_table(&tables::table(k)).unwrap();
        }
    }

    #[test]
    fn xch_counts() {
        let g = build_gadget(GadgetKind::Xch);
        assert_eq!(g.graph.vertex_count(), 28);
        assert_eq!(g.graph.edge_count(), 38);
        assert_eq!(g.ports.len(), 12);
        let names: Vec<&str> = g.crossing_vertices().iter().map(|&v| g.graph.name(v)).collect();
        assert_eq!(names, ["a", "b", "c", "d"]);
        for v in g.interior() {
            assert_eq!(g.graph.degree(v), 4);
        }
    }

    #[test]
    fn lic_shares_the_skeleton() {
        let x = build_gadget(GadgetKind::Xch);
        let l = build_gadget(GadgetKind::Lic);
        assert_eq!(GraphData::from(&x.graph).edges, GraphData::from(&l.graph).edges);
        let mut names: Vec<&str> = l.crossing_vertices().iter().map(|&v| l.graph.name(v)).collect();
        names.sort();
        assert_eq!(names, ["a", "b", "c", "d", "u5", "u6"]);
    }

    use crate::graph::GraphData;

    #[test]
    fn directed_gadgets_are_acyclic_with_stub_ports() {
        for k in GadgetKind::ALL.into_iter().filter(|k| k.is_directed()) {
            let g = build_gadget(k);
            assert!(g.graph.is_acyclic(), "{k}");
            assert_eq!(g.ports.len(), 6, "{k}");
        }
    }

    #[test]
    fn rotation_at_u1_is_counterclockwise() {
        let g = build_gadget(GadgetKind::Xch);
        let u1 = g.graph.require("u1").unwrap();
        let order: Vec<&str> =
            g.graph.rotation(u1).iter().map(|&e| g.graph.name(g.graph.edge(e).other(u1))).collect();
        assert_eq!(order, ["u2", "s1", "t1", "u5"]);
    }

    #[test]
    fn port_facts() {
        assert!(gadget_reachability(GadgetKind::Yes, "c", "b'").unwrap());
        assert!(!gadget_reachability(GadgetKind::No, "c", "b'").unwrap());
        assert!(!gadget_reachability(GadgetKind::On, "c", "b'").unwrap());
        assert!(gadget_reachability(GadgetKind::No, "a", "a'").unwrap());
        assert!(gadget_reachability(GadgetKind::Yes, "a", "a'").unwrap());
        assert!(gadget_reachability(GadgetKind::No, "x", "a'").is_err());
    }

    #[test]
    fn undirected_gadgets_are_mirror_symmetric() {
        for k in [GadgetKind::Xch, GadgetKind::Lic] {
            let g = build_gadget(k);
            let m = g.mirror().unwrap();
            let name = |v: VertexId| g.graph.name(v).to_string();
            assert_eq!(name(m[&g.graph.require("u1").unwrap()]), "u4");
            assert_eq!(name(m[&g.graph.require("b").unwrap()]), "c");
            assert_eq!(name(m[&g.graph.require("s'2").unwrap()]), "s'3");
            for e in g.graph.edges() {
                let (x, y) = (m[&e.tail], m[&e.head]);
                assert!(g.graph.edges().iter().any(|f| (f.tail == x && f.head == y) || (f.tail == y && f.head == x)));
                assert_eq!(g.graph.is_noncrossing(x), g.graph.is_noncrossing(e.tail));
            }
        }
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("lic".parse::<GadgetKind>().unwrap(), GadgetKind::Lic);
        assert!("foo".parse::<GadgetKind>().is_err());
    }

    #[test]
    fn broken_tables_are_rejected() {
        let mut t = tables::table(GadgetKind::Xch);
        t.edges.pop();
        assert!(build_from_table(&t).is_err());
        let mut t = tables::table(GadgetKind::Yes);
        let (p, q) = t.edges[2];
        t.edges.push((q, p));
        assert!(build_from_table(&t).is_err());
    }
}
