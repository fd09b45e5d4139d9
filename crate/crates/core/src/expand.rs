//! Replacing non-crossing vertices by 4-cycles.
//!
//! A degree-4 vertex `v` with rotation `(e0, e1, e2, e3)` becomes the cycle
//! `v, v#2, v#3, v#4` where `e_i` is attached to the `(i+1)`-th cycle vertex.
//! Two paths can then meet at the cycle without crossing, but can no
//! longer cross: the four cycle edges do not leave room for two
//! interleaved, edge-disjoint traversals.

use crate::error::{Error, Result};
use crate::graph::RotationGraph;
use crate::instance::{DemandClass, Instance};

pub fn expand_noncrossing(g: &RotationGraph) -> Result<RotationGraph> {
    let targets = g.noncrossing_vertices();
    if targets.is_empty() {
        return Ok(g.clone());
    }
    if g.is_directed() {
        return Err(Error::Precondition("expansion is defined for undirected graphs".into()));
    }
    let mut b = g.to_builder();
    for v in targets {
        if g.degree(v) != 4 {
            return Err(Error::UnsupportedDegree { vertex: g.name(v).to_string(), degree: g.degree(v) });
        }
        let vi = v.index();
        let rot: Vec<usize> = b.rotation(vi).to_vec();
        let base = g.name(v).to_string();
        let mut ring = vec![vi];
        for k in 2..=4 {
            ring.push(b.add_vertex(&format!("{base}#{k}"), None));
        }
        for k in 1..4 {
            let e = rot[k];
            let edge = &mut b.edges[e];
            if edge.a == vi {
                edge.a = ring[k];
            } else {
                edge.b = ring[k];
            }
        }
        for &r in &ring {
            b.set_rotation(r, Vec::new());
        }
        // Cycle edge c[k] joins ring[k] and ring[k+1].
        let c: Vec<usize> = (0..4).map(|k| b.add_edge(ring[k], ring[(k + 1) % 4])).collect();
        for k in 0..4 {
            b.set_rotation(ring[k], vec![rot[k], c[k], c[(k + 3) % 4]]);
        }
        b.set_noncrossing(vi, false);
    }
    b.build()
}

/// Expands the graph of an instance and re-resolves the demands by name.
///
/// Terminals inside the non-crossing set and crossing-exempt classes are
/// rejected: the 4-cycle forbids crossings for every path alike, and a
/// terminal would be tied to a single cycle vertex.
pub fn expand_instance(inst: &Instance) -> Result<Instance> {
    let g = &inst.graph;
    for d in &inst.demands {
        if d.crossing_exempt {
            return Err(Error::Precondition("exempt classes are not preserved by expansion".into()));
        }
        if let Some(v) = d.sources.iter().chain(&d.sinks).find(|v| g.is_noncrossing(**v)) {
            return Err(Error::Precondition(format!("terminal `{}` is a non-crossing vertex", g.name(*v))));
        }
    }
    let eg = expand_noncrossing(g)?;
    let map = |vs: &[crate::graph::VertexId]| -> Result<Vec<_>> {
        vs.iter().map(|&v| eg.require(g.name(v))).collect()
    };
    let demands = inst
        .demands
        .iter()
        .map(|d| {
            Ok(DemandClass {
                sources: map(&d.sources)?,
                sinks: map(&d.sinks)?,
                count: d.count,
                crossing_exempt: false,
                label: d.label.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Instance::new(eg, demands)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn plus(noncrossing: bool, extra: bool) -> RotationGraph {
        let mut b = GraphBuilder::new(false);
        let c = b.add_vertex("c", Some((0.0, 0.0)));
        for (name, p) in [("e", (1.0, 0.0)), ("n", (0.0, 1.0)), ("w", (-1.0, 0.0)), ("s", (0.0, -1.0))] {
            let v = b.add_vertex(name, Some(p));
            b.add_edge(c, v);
        }
        if extra {
            let e = b.find("e").unwrap();
            b.add_edge(c, e);
        }
        b.set_noncrossing(c, noncrossing);
        b.sort_rotations_geometric();
        b.build().unwrap()
    }

    #[test]
    fn identity_without_noncrossing_vertices() {
        let g = plus(false, false);
        assert_eq!(expand_noncrossing(&g).unwrap(), g);
    }

    #[test]
    fn one_vertex_grows_by_three_and_four() {
        let g = plus(true, false);
        let x = expand_noncrossing(&g).unwrap();
        assert_eq!(x.vertex_count(), g.vertex_count() + 3);
        assert_eq!(x.edge_count(), g.edge_count() + 4);
        assert!(x.noncrossing_vertices().is_empty());
        for name in ["c", "c#2", "c#3", "c#4"] {
            assert_eq!(x.degree(x.require(name).unwrap()), 3);
        }
    }

    #[test]
    fn wrong_degree_is_rejected() {
        let g = plus(true, true);
        assert!(matches!(expand_noncrossing(&g), Err(Error::UnsupportedDegree { degree: 5, .. })));
    }
}
