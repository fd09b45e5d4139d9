//! Edge cuts and the tight-cut test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, RotationGraph, VertexId};
use crate::instance::{DemandClass, Instance};

/// `δ(U)`: edges with exactly one endpoint in `U`. For directed graphs the
/// leaving (`δ⁺`) and entering (`δ⁻`) arcs are split out; for undirected
/// graphs both lists are empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutEdges {
    pub edges: Vec<EdgeId>,
    pub out_edges: Vec<EdgeId>,
    pub in_edges: Vec<EdgeId>,
}

/// Membership mask for a vertex set, rejecting unknown ids.
pub fn membership(g: &RotationGraph, u: &[VertexId]) -> Result<Vec<bool>> {
    let mut inside = vec![false; g.vertex_count()];
    for &v in u {
        if !g.contains_vertex(v) {
            return Err(Error::Input(format!("unknown vertex id {}", v.0)));
        }
        inside[v.index()] = true;
    }
    Ok(inside)
}

pub fn delta(g: &RotationGraph, u: &[VertexId]) -> Result<CutEdges> {
    let inside = membership(g, u)?;
    Ok(delta_mask(g, &inside))
}

pub(crate) fn delta_mask(g: &RotationGraph, inside: &[bool]) -> CutEdges {
    let mut cut = CutEdges::default();
    for (i, e) in g.edges().iter().enumerate() {
        let (t, h) = (inside[e.tail.index()], inside[e.head.index()]);
        if t == h {
            continue;
        }
        let id = EdgeId(i as u32);
        cut.edges.push(id);
        if g.is_directed() {
            if t {
                cut.out_edges.push(id);
            } else {
                cut.in_edges.push(id);
            }
        }
    }
    cut
}

/// Side of a vertex set relative to `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Side {
    Inside,
    Outside,
    Mixed,
}

pub(crate) fn side(inside: &[bool], vs: &[VertexId]) -> Side {
    let n_in = vs.iter().filter(|v| inside[v.index()]).count();
    if n_in == vs.len() {
        Side::Inside
    } else if n_in == 0 {
        Side::Outside
    } else {
        Side::Mixed
    }
}

/// How many paths of a class must leave `U` (`Some(0)` if none, `None` if
/// the endpoint sets straddle the cut).
pub(crate) fn leaving_demand(inside: &[bool], d: &DemandClass) -> Option<u32> {
    match (side(inside, &d.sources), side(inside, &d.sinks)) {
        (Side::Inside, Side::Outside) => Some(d.count),
        (Side::Inside, Side::Inside) | (Side::Outside, Side::Outside) | (Side::Outside, Side::Inside) => Some(0),
        _ => None,
    }
}

pub(crate) fn entering_demand(inside: &[bool], d: &DemandClass) -> Option<u32> {
    match (side(inside, &d.sources), side(inside, &d.sinks)) {
        (Side::Outside, Side::Inside) => Some(d.count),
        (Side::Inside, Side::Inside) | (Side::Outside, Side::Outside) | (Side::Inside, Side::Outside) => Some(0),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tightness {
    /// Edges of `δ(U)` (undirected) or arcs of `δ⁺(U)` (directed).
    pub capacity: u64,
    /// Paths that must cross the cut, when determined.
    pub demand: Option<u64>,
    pub slack: Option<i64>,
    /// `None` when some class straddles the cut ambiguously.
    pub tight: Option<bool>,
}

/// Capacity minus crossing demand at `δ(U)`. Directed graphs use the
/// leaving arcs and the paths that must leave `U`.
pub fn is_tight(inst: &Instance, u: &[VertexId]) -> Result<Tightness> {
    let g = &inst.graph;
    let inside = membership(g, u)?;
    let cut = delta_mask(g, &inside);
    let capacity = if g.is_directed() { cut.out_edges.len() } else { cut.edges.len() } as u64;
    let mut demand = Some(0u64);
    for d in &inst.demands {
        let crossing = if g.is_directed() {
            leaving_demand(&inside, d)
        } else {
            match (leaving_demand(&inside, d), entering_demand(&inside, d)) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            }
        };
        demand = match (demand, crossing) {
            (Some(x), Some(c)) => Some(x + c as u64),
            _ => None,
        };
    }
    let slack = demand.map(|d| capacity as i64 - d as i64);
    Ok(Tightness { capacity, demand, slack, tight: slack.map(|s| s == 0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn path3(directed: bool) -> RotationGraph {
        let mut b = GraphBuilder::new(directed);
        let x = b.add_vertex("x", None);
        let y = b.add_vertex("y", None);
        let z = b.add_vertex("z", None);
        b.add_edge(x, y);
        b.add_edge(y, z);
        b.add_edge(x, y);
        b.build().unwrap()
    }

    #[test]
    fn trivial_cuts_are_empty() {
        let g = path3(false);
        assert!(delta(&g, &[]).unwrap().edges.is_empty());
        let all: Vec<VertexId> = g.vertices().collect();
        assert!(delta(&g, &all).unwrap().edges.is_empty());
    }

    #[test]
    fn parallel_edges_count_separately() {
        let g = path3(false);
        assert_eq!(delta(&g, &[VertexId(0)]).unwrap().edges.len(), 2);
        assert_eq!(delta(&g, &[VertexId(1)]).unwrap().edges.len(), 3);
    }

    #[test]
    fn directed_partition() {
        let g = path3(true);
        let c = delta(&g, &[VertexId(1)]).unwrap();
        assert_eq!(c.out_edges, vec![EdgeId(1)]);
        assert_eq!(c.in_edges, vec![EdgeId(0), EdgeId(2)]);
    }

    #[test]
    fn unknown_vertex_is_an_input_error() {
        let g = path3(false);
        assert!(delta(&g, &[VertexId(7)]).is_err());
    }

    #[test]
    fn tightness_and_slack() {
        let g = path3(false);
        let d = DemandClass::new(vec![VertexId(0)], vec![VertexId(2)], 1);
        let inst = Instance::new(g, vec![d]).unwrap();
        let t = is_tight(&inst, &[VertexId(2)]).unwrap();
        assert_eq!(t.tight, Some(true));
        let t = is_tight(&inst, &[VertexId(1)]).unwrap();
        assert_eq!((t.capacity, t.slack), (3, Some(3)));
        let t = is_tight(&inst, &[VertexId(0)]).unwrap();
        assert_eq!(t.slack, Some(1));
    }

    #[test]
    fn straddling_sources_are_indeterminate() {
        let g = path3(false);
        let d = DemandClass::new(vec![VertexId(0), VertexId(2)], vec![VertexId(1)], 1);
        let inst = Instance::new(g, vec![d]).unwrap();
        assert_eq!(is_tight(&inst, &[VertexId(0)]).unwrap().tight, None);
    }
}
