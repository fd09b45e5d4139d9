//! Crossings between paths, the segment-exchange uncrossing, and the
//! crossing order of one family of paths along another.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, RotationGraph, VertexId};
use crate::instance::{path_vertices, reversed, RoutedPath, Routing};

/// A path traversing an intermediate vertex: in through `e_in`, out through
/// `e_out`. `index` is the position of the vertex in the path's vertex
/// sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pass {
    pub vertex: VertexId,
    pub index: usize,
    pub e_in: EdgeId,
    pub e_out: EdgeId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub path_a: usize,
    pub path_b: usize,
    pub vertex: VertexId,
}

/// Intermediate passes of a path, in traversal order.
pub fn passes(g: &RotationGraph, p: &RoutedPath) -> Result<Vec<Pass>> {
    let seq = path_vertices(g, p)?;
    Ok((1..p.edges.len())
        .map(|i| Pass { vertex: seq[i], index: i, e_in: p.edges[i - 1], e_out: p.edges[i] })
        .collect())
}

/// Whether the slot pairs `{a1, a2}` and `{b1, b2}` interleave in a cyclic
/// order. Pairs sharing a slot never interleave.
#[inline]
pub fn interleaved(a1: usize, a2: usize, b1: usize, b2: usize) -> bool {
    if a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2 {
        return false;
    }
    let (lo, hi) = if a1 < a2 { (a1, a2) } else { (a2, a1) };
    let in1 = lo < b1 && b1 < hi;
    let in2 = lo < b2 && b2 < hi;
    in1 != in2
}

/// Whether two passes through the same vertex cross.
#[inline]
pub fn passes_cross(g: &RotationGraph, p: &Pass, q: &Pass) -> bool {
    debug_assert_eq!(p.vertex, q.vertex);
    let v = p.vertex;
    interleaved(g.slot(p.e_in, v), g.slot(p.e_out, v), g.slot(q.e_in, v), g.slot(q.e_out, v))
}

/// Crossing pairs of passes between two pass lists, as
/// `(index into pa, index into pb, vertex)`, ordered along `pa`.
pub fn pair_crossings(g: &RotationGraph, pa: &[Pass], pb: &[Pass]) -> Vec<(usize, usize, VertexId)> {
    let mut at: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for (j, q) in pb.iter().enumerate() {
        at.entry(q.vertex).or_default().push(j);
    }
    let mut out = Vec::new();
    for (i, p) in pa.iter().enumerate() {
        if let Some(js) = at.get(&p.vertex) {
            for &j in js {
                if passes_cross(g, p, &pb[j]) {
                    out.push((i, j, p.vertex));
                }
            }
        }
    }
    out
}

/// All crossings among the selected paths. With `only_noncrossing`, only
/// crossings at non-crossing vertices are reported. One entry per crossing
/// pair of passes, sorted by (path, path, vertex).
pub fn crossings_filtered(
    g: &RotationGraph,
    paths: &[RoutedPath],
    include: impl Fn(usize) -> bool,
    only_noncrossing: bool,
) -> Result<Vec<Crossing>> {
    let mut at: HashMap<VertexId, Vec<(usize, Pass)>> = HashMap::new();
    for (i, p) in paths.iter().enumerate() {
        if !include(i) {
            continue;
        }
        for pass in passes(g, p)? {
            if only_noncrossing && !g.is_noncrossing(pass.vertex) {
                continue;
            }
            at.entry(pass.vertex).or_default().push((i, pass));
        }
    }
    let mut out = Vec::new();
    for list in at.values() {
        for (x, (i, p)) in list.iter().enumerate() {
            for (j, q) in &list[x + 1..] {
                if i != j && passes_cross(g, p, q) {
                    let (a, b) = if i < j { (*i, *j) } else { (*j, *i) };
                    out.push(Crossing { path_a: a, path_b: b, vertex: p.vertex });
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Every `(P, Q, u)` such that P and Q cross at `u`.
pub fn detect_crossings(g: &RotationGraph, routing: &Routing) -> Result<Vec<Crossing>> {
    check_edges(g, routing)?;
    crossings_filtered(g, &routing.paths, |_| true, false)
}

fn check_edges(g: &RotationGraph, routing: &Routing) -> Result<()> {
    for p in &routing.paths {
        path_vertices(g, p)?;
    }
    Ok(())
}

fn total_crossings(g: &RotationGraph, paths: &[RoutedPath]) -> Result<usize> {
    Ok(crossings_filtered(g, paths, |_| true, false)?.len())
}

fn endpoints(g: &RotationGraph, p: &RoutedPath) -> Result<(VertexId, VertexId)> {
    let seq = path_vertices(g, p)?;
    Ok((seq[0], *seq.last().unwrap()))
}

fn same_extremities(a: (VertexId, VertexId), b: (VertexId, VertexId)) -> bool {
    a == b || a == (b.1, b.0)
}

/// Whether every pair crosses at most once and same-extremity pairs never.
pub fn is_uncrossed(g: &RotationGraph, routing: &Routing) -> Result<bool> {
    Ok(first_violation(g, &routing.paths)?.is_none())
}

/// Smallest pair `(a, b)` violating the uncrossed condition.
fn first_violation(g: &RotationGraph, paths: &[RoutedPath]) -> Result<Option<(usize, usize)>> {
    let all = crossings_filtered(g, paths, |_| true, false)?;
    let mut counts: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
    for c in &all {
        *counts.entry((c.path_a, c.path_b)).or_default() += 1;
    }
    for (&(a, b), &n) in &counts {
        if n >= 2 {
            return Ok(Some((a, b)));
        }
        if same_extremities(endpoints(g, &paths[a])?, endpoints(g, &paths[b])?) {
            return Ok(Some((a, b)));
        }
    }
    Ok(None)
}

/// Exchange the segments of `p` and `q` between two meeting points, given
/// as `(index along p, index along q)` with both indices increasing.
fn exchange(p: &RoutedPath, q: &RoutedPath, u: (usize, usize), v: (usize, usize)) -> (RoutedPath, RoutedPath) {
    let (i1, j1) = u;
    let (i2, j2) = v;
    let mut pe = p.edges[..i1].to_vec();
    pe.extend_from_slice(&q.edges[j1..j2]);
    pe.extend_from_slice(&p.edges[i2..]);
    let mut qe = q.edges[..j1].to_vec();
    qe.extend_from_slice(&p.edges[i1..i2]);
    qe.extend_from_slice(&q.edges[j2..]);
    (
        RoutedPath { class: p.class, start: p.start, edges: pe },
        RoutedPath { class: q.class, start: q.start, edges: qe },
    )
}

/// Candidate exchanges for a violating pair, in preference order.
fn candidate_exchanges(
    g: &RotationGraph,
    p: &RoutedPath,
    q: &RoutedPath,
) -> Result<Vec<(RoutedPath, RoutedPath)>> {
    let mut out = Vec::new();
    let ends_p = endpoints(g, p)?;
    for flip in [false, true] {
        let qq = if flip { reversed(g, q)? } else { q.clone() };
        let ends_q = endpoints(g, &qq)?;
        let pp = passes(g, p)?;
        let pq = passes(g, &qq)?;
        let cross = pair_crossings(g, &pp, &pq);
        let meets: Vec<(usize, usize)> =
            cross.iter().map(|&(i, j, _)| (pp[i].index, pq[j].index)).collect();
        let mut points = Vec::new();
        if ends_p.0 == ends_q.0 {
            points.push((0, 0));
        }
        points.extend(meets.iter().copied());
        if ends_p.1 == ends_q.1 {
            points.push((p.edges.len(), qq.edges.len()));
        }
        for x in 0..points.len() {
            for y in x + 1..points.len() {
                let (u, v) = (points[x], points[y]);
                if u.0 < v.0 && u.1 < v.1 {
                    let (np, nq) = exchange(p, &qq, u, v);
                    let nq = if flip { reversed(g, &nq)? } else { nq };
                    out.push((np, nq));
                }
            }
        }
    }
    Ok(out)
}

/// Iterated segment exchange. Each round takes the smallest violating pair
/// and applies the first exchange that strictly lowers the total number of
/// crossings. Undirected graphs only.
pub fn uncross(g: &RotationGraph, routing: &Routing) -> Result<Routing> {
    if g.is_directed() {
        return Err(Error::Precondition("uncrossing needs an undirected graph".into()));
    }
    check_edges(g, routing)?;
    let mut paths = routing.paths.clone();
    let mut total = total_crossings(g, &paths)?;
    while let Some((a, b)) = first_violation(g, &paths)? {
        let mut improved = false;
        for (np, nq) in candidate_exchanges(g, &paths[a], &paths[b])? {
            let mut trial = paths.clone();
            trial[a] = np;
            trial[b] = nq;
            let t = total_crossings(g, &trial)?;
            if t < total {
                paths = trial;
                total = t;
                improved = true;
                break;
            }
        }
        if !improved {
            return Err(Error::Internal(format!(
                "no exchange lowers the crossing count for paths {a} and {b}"
            )));
        }
    }
    Ok(Routing { paths })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingOrder {
    /// For each path of class A (by routing index), the class-B paths it
    /// crosses, in traversal order.
    pub sequences: Vec<(usize, Vec<usize>)>,
    pub all_equal: bool,
}

/// Order in which each class-A path crosses the class-B paths.
pub fn crossing_order(g: &RotationGraph, routing: &Routing, class_a: usize, class_b: usize) -> Result<CrossingOrder> {
    if !is_uncrossed(g, routing)? {
        return Err(Error::Precondition("routing is not uncrossed".into()));
    }
    let all_passes: Vec<Vec<Pass>> =
        routing.paths.iter().map(|p| passes(g, p)).collect::<Result<_>>()?;
    let mut sequences = Vec::new();
    for (i, p) in routing.paths.iter().enumerate() {
        if p.class != class_a {
            continue;
        }
        let mut hits: Vec<(usize, usize)> = Vec::new();
        for (j, q) in routing.paths.iter().enumerate() {
            if q.class != class_b || i == j {
                continue;
            }
            for (x, _, _) in pair_crossings(g, &all_passes[i], &all_passes[j]) {
                hits.push((all_passes[i][x].index, j));
            }
        }
        hits.sort();
        sequences.push((i, hits.into_iter().map(|h| h.1).collect::<Vec<_>>()));
    }
    let all_equal = sequences.windows(2).all(|w| w[0].1 == w[1].1);
    Ok(CrossingOrder { sequences, all_equal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    #[test]
    fn interleaving_predicate() {
        assert!(interleaved(0, 2, 1, 3));
        assert!(interleaved(2, 0, 3, 1));
        assert!(!interleaved(0, 1, 2, 3));
        assert!(!interleaved(0, 3, 1, 2));
        assert!(!interleaved(0, 2, 0, 3));
    }

    /// Plus-shaped star: centre `c` with arms e, n, w, s.
    fn plus() -> (RotationGraph, [EdgeId; 4]) {
        let mut b = GraphBuilder::new(false);
        let c = b.add_vertex("c", Some((0.0, 0.0)));
        let mut es = [EdgeId(0); 4];
        for (k, (name, p)) in [("e", (1.0, 0.0)), ("n", (0.0, 1.0)), ("w", (-1.0, 0.0)), ("s", (0.0, -1.0))]
            .into_iter()
            .enumerate()
        {
            let v = b.add_vertex(name, Some(p));
            es[k] = EdgeId(b.add_edge(c, v) as u32);
        }
        b.sort_rotations_geometric();
        (b.build().unwrap(), es)
    }

    #[test]
    fn straight_through_paths_cross() {
        let (g, [e, n, w, s]) = plus();
        let r = Routing::new(vec![
            RoutedPath { class: 0, start: g.require("w").unwrap(), edges: vec![w, e] },
            RoutedPath { class: 0, start: g.require("s").unwrap(), edges: vec![s, n] },
        ]);
        let c = detect_crossings(&g, &r).unwrap();
        assert_eq!(c, vec![Crossing { path_a: 0, path_b: 1, vertex: g.require("c").unwrap() }]);
    }

    #[test]
    fn turning_paths_do_not_cross() {
        let (g, [e, n, w, s]) = plus();
        let r = Routing::new(vec![
            RoutedPath { class: 0, start: g.require("w").unwrap(), edges: vec![w, n] },
            RoutedPath { class: 0, start: g.require("s").unwrap(), edges: vec![s, e] },
        ]);
        assert!(detect_crossings(&g, &r).unwrap().is_empty());
    }

    #[test]
    fn malformed_paths_are_errors() {
        let (g, [e, n, _, _]) = plus();
        let r = Routing::new(vec![RoutedPath { class: 0, start: g.require("w").unwrap(), edges: vec![e, n] }]);
        assert!(matches!(detect_crossings(&g, &r), Err(Error::MalformedRouting(_))));
    }

    #[test]
    fn uncross_rejects_directed_graphs() {
        let mut b = GraphBuilder::new(true);
        let x = b.add_vertex("x", None);
        let y = b.add_vertex("y", None);
        b.add_edge(x, y);
        let g = b.build().unwrap();
        assert!(uncross(&g, &Routing::default()).is_err());
    }
}
