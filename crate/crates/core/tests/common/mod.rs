//! Generators and the naive reference oracle shared by the integration
//! tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use hardpaths::cnf::CnfFormula;
use hardpaths::graph::{EdgeId, GraphBuilder, RotationGraph, VertexId};
use hardpaths::{DemandClass, Instance, RoutedPath, Routing};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// A random instance with at most ten edges: directed or not, random
/// rotations, a few non-crossing vertices, one or two classes of count one
/// or two, sometimes crossing-exempt, with multi-vertex terminal sets.
pub fn small_instance(seed: u64) -> Instance {
    let mut rng = StdRng::seed_from_u64(seed);
    let directed = rng.gen_bool(0.3);
    let n = rng.gen_range(4..=6usize);
    let mut b = GraphBuilder::new(directed);
    let vs: Vec<usize> = (0..n)
        .map(|k| b.add_vertex(&format!("v{k}"), Some((rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0)))))
        .collect();
    let m = rng.gen_range(4..=10usize);
    while b.edge_count() < m {
        let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if x != y {
            b.add_edge(vs[x], vs[y]);
        }
    }
    for &v in &vs {
        let mut rot = b.rotation(v).to_vec();
        rot.shuffle(&mut rng);
        b.set_rotation(v, rot);
        if rng.gen_bool(0.35) {
            b.set_noncrossing(v, true);
        }
    }
    let g = b.build().expect("generated graphs are valid");
    let all: Vec<VertexId> = g.vertices().collect();
    let mut demands = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let mut pick = |k: usize| -> Vec<VertexId> { all.choose_multiple(&mut rng, k).copied().collect() };
        let sources = pick(1 + (seed as usize % 2));
        let sinks = pick(1 + (seed as usize / 2 % 2));
        let mut d = DemandClass::new(sources, sinks, rng.gen_range(1..=2));
        if rng.gen_bool(0.2) {
            d = d.exempt();
        }
        demands.push(d);
    }
    Instance::new(g, demands).expect("generated demands are valid")
}

/// Every vertex-simple path of a class: edge orders are enumerated one
/// edge at a time and kept while they still spell a walk from a source
/// that never revisits a vertex; the complete ones end at a sink.
pub fn class_paths(g: &RotationGraph, d: &DemandClass, class: usize) -> Vec<RoutedPath> {
    fn extend(
        g: &RotationGraph,
        d: &DemandClass,
        class: usize,
        start: VertexId,
        at: VertexId,
        seq: &mut Vec<EdgeId>,
        seen: &mut Vec<VertexId>,
        out: &mut Vec<RoutedPath>,
    ) {
        if !seq.is_empty() && d.sinks.contains(&at) {
            out.push(RoutedPath { class, start, edges: seq.clone() });
        }
        for e in g.edge_ids() {
            if seq.contains(&e) {
                continue;
            }
            let ed = g.edge(e);
            let next = if ed.tail == at {
                ed.head
            } else if !g.is_directed() && ed.head == at {
                ed.tail
            } else {
                continue;
            };
            if seen.contains(&next) {
                continue;
            }
            seq.push(e);
            seen.push(next);
            extend(g, d, class, start, next, seq, seen, out);
            seen.pop();
            seq.pop();
        }
    }
    let mut out = Vec::new();
    for &s in &d.sources {
        extend(g, d, class, s, s, &mut Vec::new(), &mut vec![s], &mut out);
    }
    out
}

fn walk(g: &RotationGraph, p: &RoutedPath) -> Vec<VertexId> {
    let mut v = p.start;
    let mut out = vec![v];
    for &e in &p.edges {
        v = g.edge(e).other(v);
        out.push(v);
    }
    out
}

/// `(vertex, slot in, slot out)` for every interior vertex of a path.
fn turns(g: &RotationGraph, p: &RoutedPath) -> Vec<(VertexId, usize, usize)> {
    let w = walk(g, p);
    (1..p.edges.len()).map(|i| (w[i], g.slot(p.edges[i - 1], w[i]), g.slot(p.edges[i], w[i]))).collect()
}

/// Two chords of a circle cross when exactly one end of the second lies
/// strictly on the clockwise arc from the first chord's lower end to its
/// upper end.
fn chords_cross(a: (usize, usize), b: (usize, usize)) -> bool {
    let (lo, hi) = (a.0.min(a.1), a.0.max(a.1));
    let inside = |x: usize| lo < x && x < hi;
    let ends = [b.0, b.1];
    if ends.iter().any(|&x| x == lo || x == hi) {
        return false;
    }
    inside(b.0) != inside(b.1)
}

fn compatible(g: &RotationGraph, inst: &Instance, p: &RoutedPath, q: &RoutedPath) -> bool {
    if p.edges.iter().any(|e| q.edges.contains(e)) {
        return false;
    }
    if inst.demands[p.class].crossing_exempt || inst.demands[q.class].crossing_exempt {
        return true;
    }
    let tq = turns(g, q);
    for (v, a1, a2) in turns(g, p) {
        if !g.is_noncrossing(v) {
            continue;
        }
        if tq.iter().any(|&(u, b1, b2)| u == v && chords_cross((a1, a2), (b1, b2))) {
            return false;
        }
    }
    true
}

/// All routings of an instance, in canonical form, by brute force: for
/// each class every unordered choice of `count` candidate paths, filtered
/// by edge-disjointness and the crossing rule.
pub fn naive_routings(inst: &Instance) -> BTreeSet<Routing> {
    let g = &inst.graph;
    let per_class: Vec<Vec<RoutedPath>> =
        inst.demands.iter().enumerate().map(|(c, d)| class_paths(g, d, c)).collect();
    let slots: Vec<usize> =
        inst.demands.iter().enumerate().flat_map(|(c, d)| std::iter::repeat(c).take(d.count as usize)).collect();
    let mut out = BTreeSet::new();
    fn rec(
        inst: &Instance,
        per_class: &[Vec<RoutedPath>],
        slots: &[usize],
        k: usize,
        chosen: &mut Vec<(usize, usize)>,
        out: &mut BTreeSet<Routing>,
    ) {
        if k == slots.len() {
            let paths = chosen.iter().map(|&(c, i)| per_class[c][i].clone()).collect();
            out.insert(Routing::new(paths).canonical());
            return;
        }
        let c = slots[k];
        // Same-class slots pick increasing candidate indices: an unordered
        // choice.
        let from = match chosen.last() {
            Some(&(pc, pi)) if pc == c => pi + 1,
            _ => 0,
        };
        for i in from..per_class[c].len() {
            let p = &per_class[c][i];
            if chosen.iter().all(|&(qc, qi)| compatible(&inst.graph, inst, p, &per_class[qc][qi])) {
                chosen.push((c, i));
                rec(inst, per_class, slots, k + 1, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(inst, &per_class, &slots, 0, &mut Vec::new(), &mut out);
    out
}

/// A `w` by `h` grid with geometric rotations; every vertex may host
/// crossings.
pub fn square_grid(w: usize, h: usize) -> RotationGraph {
    let mut b = GraphBuilder::new(false);
    let mut id = vec![vec![0; h]; w];
    for (x, col) in id.iter_mut().enumerate() {
        for (y, slot) in col.iter_mut().enumerate() {
            *slot = b.add_vertex(&format!("({x},{y})"), Some((x as f64, y as f64)));
        }
    }
    for x in 0..w {
        for y in 0..h {
            if x + 1 < w {
                b.add_edge(id[x][y], id[x + 1][y]);
            }
            if y + 1 < h {
                b.add_edge(id[x][y], id[x][y + 1]);
            }
        }
    }
    b.sort_rotations_geometric();
    b.build().expect("grid builds")
}

/// Up to `max_paths` edge-disjoint, vertex-simple random walks of at least
/// two edges, in up to three classes.
pub fn random_routing(g: &RotationGraph, rng: &mut StdRng, max_paths: usize) -> Routing {
    let mut used = vec![false; g.edge_count()];
    let mut paths = Vec::new();
    for _ in 0..max_paths * 4 {
        if paths.len() == max_paths {
            break;
        }
        let start = VertexId(rng.gen_range(0..g.vertex_count()) as u32);
        let len = rng.gen_range(2..=14);
        let mut seen = vec![start];
        let mut edges = Vec::new();
        let mut at = start;
        while edges.len() < len {
            let options: Vec<EdgeId> = g
                .rotation(at)
                .iter()
                .copied()
                .filter(|&e| !used[e.index()] && !edges.contains(&e) && !seen.contains(&g.edge(e).other(at)))
                .collect();
            let Some(&e) = options.choose(rng) else { break };
            edges.push(e);
            at = g.edge(e).other(at);
            seen.push(at);
        }
        if edges.len() >= 2 {
            for e in &edges {
                used[e.index()] = true;
            }
            paths.push(RoutedPath { class: rng.gen_range(0..3), start, edges });
        }
    }
    Routing::new(paths)
}

pub fn path_ends(g: &RotationGraph, p: &RoutedPath) -> (VertexId, VertexId) {
    (p.start, *walk(g, p).last().unwrap())
}

/// A random 3-CNF formula with three distinct variables per clause.
pub fn random_3cnf(rng: &mut StdRng, vars: u32, clauses: usize) -> CnfFormula {
    let cl = (0..clauses)
        .map(|_| {
            let mut vs: Vec<i32> = (1..=vars as i32).collect();
            vs.shuffle(rng);
            vs.truncate(3);
            vs.into_iter().map(|v| if rng.gen_bool(0.5) { v } else { -v }).collect()
        })
        .collect();
    CnfFormula::new(vars, cl).unwrap()
}

/// Assignments by exhaustive enumeration, independent of the crate.
pub fn brute_force(f: &CnfFormula) -> Vec<Vec<bool>> {
    let n = f.num_vars as usize;
    (0u32..1 << n)
        .map(|m| (0..n).map(|i| m >> i & 1 == 1).collect::<Vec<bool>>())
        .filter(|a| f.clauses.iter().all(|c| c.iter().any(|&l| a[l.unsigned_abs() as usize - 1] == (l > 0))))
        .collect()
}
