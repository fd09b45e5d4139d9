//! Decision by CDCL satisfiability.
//!
//! Each path slot `p` and edge `e` gets a variable "p uses e". Per slot and
//! vertex, degree constraints make the used edges a vertex-simple path from
//! one chosen source to one chosen sink, possibly together with disjoint
//! cycles. At a non-crossing vertex two non-exempt slots may not use
//! interleaved edge pairs. Stray cycles are harmless: deleting them from a
//! model removes edges and passes only, so every model yields a routing and
//! every routing is a model. Witnesses are read off with the cycles dropped.

use cadical::{Callbacks, Solver};

use crate::graph::{EdgeId, RotationGraph, VertexId};
use crate::instance::{Instance, RoutedPath, Routing};

use super::{CutSet, SearchPolicy, SolveStats, Status};

#[derive(Default)]
struct Counter {
    learned: u64,
}

impl Callbacks for Counter {
    fn max_length(&self) -> i32 {
        i32::MAX
    }

    fn learn(&mut self, _clause: &[i32]) {
        self.learned += 1;
    }
}

struct Encoding {
    clauses: Vec<Vec<i32>>,
    next: i32,
    m: usize,
    /// Start and end variables per slot: `(vertex, var)`.
    starts: Vec<Vec<(VertexId, i32)>>,
    ends: Vec<Vec<(VertexId, i32)>>,
}

impl Encoding {
    fn x(&self, p: usize, e: EdgeId) -> i32 {
        (p * self.m + e.index()) as i32 + 1
    }

    fn fresh(&mut self) -> i32 {
        let v = self.next;
        self.next += 1;
        v
    }

    fn add(&mut self, c: Vec<i32>) {
        self.clauses.push(c);
    }

    fn at_most_one(&mut self, lits: &[i32]) {
        for i in 0..lits.len() {
            for j in i + 1..lits.len() {
                self.add(vec![-lits[i], -lits[j]]);
            }
        }
    }

    fn exactly_one(&mut self, lits: &[i32]) {
        self.add(lits.to_vec());
        self.at_most_one(lits);
    }
}

fn encode(inst: &Instance, cuts: &CutSet, slots: &[usize]) -> Encoding {
    let g = &inst.graph;
    let m = g.edge_count();
    let mut enc = Encoding {
        clauses: Vec::new(),
        next: (slots.len() * m) as i32 + 1,
        m,
        starts: Vec::new(),
        ends: Vec::new(),
    };
    for (p, &c) in slots.iter().enumerate() {
        let d = &inst.demands[c];
        let starts: Vec<(VertexId, i32)> = d.sources.iter().map(|&v| (v, enc.fresh())).collect();
        let ends: Vec<(VertexId, i32)> = d.sinks.iter().map(|&v| (v, enc.fresh())).collect();
        enc.exactly_one(&starts.iter().map(|s| s.1).collect::<Vec<_>>());
        enc.exactly_one(&ends.iter().map(|s| s.1).collect::<Vec<_>>());
        enc.starts.push(starts.clone());
        enc.ends.push(ends.clone());
        let mut s_of = vec![0i32; g.vertex_count()];
        let mut t_of = vec![0i32; g.vertex_count()];
        for &(v, s) in &starts {
            s_of[v.index()] = s;
        }
        for &(v, t) in &ends {
            t_of[v.index()] = t;
            if s_of[v.index()] != 0 {
                enc.add(vec![-s_of[v.index()], -t]);
            }
        }
        for v in g.vertices() {
            let (s, t) = (s_of[v.index()], t_of[v.index()]);
            if g.is_directed() {
                let outs: Vec<i32> = g.rotation(v).iter().filter(|&&e| g.edge(e).tail == v).map(|&e| enc.x(p, e)).collect();
                let ins: Vec<i32> = g.rotation(v).iter().filter(|&&e| g.edge(e).head == v).map(|&e| enc.x(p, e)).collect();
                enc.at_most_one(&outs);
                enc.at_most_one(&ins);
                // out used and in unused <=> start; in used and out unused <=> end
                for &o in &outs {
                    let mut c = vec![-o];
                    c.extend(&ins);
                    if s != 0 {
                        c.push(s);
                    }
                    enc.add(c);
                }
                for &i in &ins {
                    let mut c = vec![-i];
                    c.extend(&outs);
                    if t != 0 {
                        c.push(t);
                    }
                    enc.add(c);
                }
                if s != 0 {
                    let mut c = vec![-s];
                    c.extend(&outs);
                    enc.add(c);
                    for &i in &ins {
                        enc.add(vec![-s, -i]);
                    }
                }
                if t != 0 {
                    let mut c = vec![-t];
                    c.extend(&ins);
                    enc.add(c);
                    for &o in &outs {
                        enc.add(vec![-t, -o]);
                    }
                }
            } else {
                let inc: Vec<i32> = g.rotation(v).iter().map(|&e| enc.x(p, e)).collect();
                // at most two incident edges
                for i in 0..inc.len() {
                    for j in i + 1..inc.len() {
                        for k in j + 1..inc.len() {
                            enc.add(vec![-inc[i], -inc[j], -inc[k]]);
                        }
                    }
                }
                // a terminal end has exactly one edge
                for term in [s, t] {
                    if term == 0 {
                        continue;
                    }
                    let mut c = vec![-term];
                    c.extend(&inc);
                    enc.add(c);
                    for i in 0..inc.len() {
                        for j in i + 1..inc.len() {
                            enc.add(vec![-term, -inc[i], -inc[j]]);
                        }
                    }
                }
                // otherwise the degree is not one
                for i in 0..inc.len() {
                    let mut c = vec![-inc[i]];
                    c.extend(inc.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &l)| l));
                    if s != 0 {
                        c.push(s);
                    }
                    if t != 0 {
                        c.push(t);
                    }
                    enc.add(c);
                }
            }
        }
    }
    // edge-disjointness
    for e in g.edge_ids() {
        let lits: Vec<i32> = (0..slots.len()).map(|p| enc.x(p, e)).collect();
        enc.at_most_one(&lits);
    }
    // non-crossing vertices
    let active: Vec<usize> = (0..slots.len()).filter(|&p| !inst.demands[slots[p]].crossing_exempt).collect();
    for v in g.noncrossing_vertices() {
        let rot = g.rotation(v);
        let d = rot.len();
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    for l in k + 1..d {
                        for &p in &active {
                            for &q in &active {
                                if p != q {
                                    enc.add(vec![
                                        -enc.x(p, rot[i]),
                                        -enc.x(p, rot[k]),
                                        -enc.x(q, rot[j]),
                                        -enc.x(q, rot[l]),
                                    ]);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // same-class slots take their starts in vertex order
    for p in 1..slots.len() {
        if slots[p] != slots[p - 1] {
            continue;
        }
        let mut order = Vec::new();
        for &(v, sa) in &enc.starts[p - 1] {
            for &(u, sb) in &enc.starts[p] {
                if u < v {
                    order.push(vec![-sa, -sb]);
                }
            }
        }
        enc.clauses.extend(order);
    }
    // Registered cuts: a slot whose class lies across a cut uses one of its
    // edges (in the right direction for arcs).
    for u in &cuts.cuts {
        let mut inside = vec![false; g.vertex_count()];
        for v in u {
            inside[v.index()] = true;
        }
        for (p, &c) in slots.iter().enumerate() {
            let d = &inst.demands[c];
            let s_in = d.sources.iter().all(|v| inside[v.index()]);
            let s_out = d.sources.iter().all(|v| !inside[v.index()]);
            let t_in = d.sinks.iter().all(|v| inside[v.index()]);
            let t_out = d.sinks.iter().all(|v| !inside[v.index()]);
            let leaving = s_in && t_out;
            let entering = s_out && t_in;
            if !leaving && !entering {
                continue;
            }
            let lits: Vec<i32> = g
                .edge_ids()
                .filter(|&e| {
                    let ed = g.edge(e);
                    let (a, b) = (inside[ed.tail.index()], inside[ed.head.index()]);
                    if g.is_directed() {
                        (leaving && a && !b) || (entering && !a && b)
                    } else {
                        a != b
                    }
                })
                .map(|e| enc.x(p, e))
                .collect();
            enc.add(lits);
        }
    }
    enc
}

/// Follows slot `p`'s edges from its start to its end, ignoring cycles.
fn extract(g: &RotationGraph, used: &[bool], start: VertexId, end: VertexId, class: usize) -> Option<RoutedPath> {
    let mut edges = Vec::new();
    let mut v = start;
    let mut prev: Option<EdgeId> = None;
    while v != end || edges.is_empty() {
        let next = g
            .leaving(v)
            .find(|&e| used[e.index()] && Some(e) != prev && !edges.contains(&e))?;
        edges.push(next);
        prev = Some(next);
        v = g.edge(next).other(v);
        if edges.len() > g.edge_count() {
            return None;
        }
    }
    Some(RoutedPath { class, start, edges })
}

pub(crate) struct SatOutcome {
    pub status: Status,
    pub witness: Option<Routing>,
    pub stats: SolveStats,
}

pub(crate) fn decide(inst: &Instance, policy: &SearchPolicy, cuts: &CutSet) -> SatOutcome {
    let slots: Vec<usize> =
        inst.demands.iter().enumerate().flat_map(|(c, d)| std::iter::repeat(c).take(d.count as usize)).collect();
    let none = CutSet::none();
    let enc = encode(inst, if policy.pruning { cuts } else { &none }, &slots);
    let mut solver: Solver<Counter> = Solver::new();
    solver.set_callbacks(Some(Counter::default()));
    if policy.node_budget < i32::MAX as u64 {
        solver.set_limit("conflicts", policy.node_budget as i32).expect("conflict limit is supported");
    }
    for c in &enc.clauses {
        solver.add_clause(c.iter().copied());
    }
    let answer = if slots.is_empty() { Some(true) } else { solver.solve() };
    let learned = solver.get_callbacks().map_or(0, |c| c.learned);
    let mut stats = SolveStats { nodes: learned.min(policy.node_budget), ..Default::default() };
    match answer {
        None => SatOutcome { status: Status::BudgetExceeded, witness: None, stats },
        Some(false) => SatOutcome { status: Status::Unsat, witness: None, stats },
        Some(true) => {
            stats.solutions = 1;
            let g = &inst.graph;
            let mut paths = Vec::with_capacity(slots.len());
            for (p, &c) in slots.iter().enumerate() {
                let used: Vec<bool> = g.edge_ids().map(|e| solver.value(enc.x(p, e)) == Some(true)).collect();
                let pick = |list: &[(VertexId, i32)]| {
                    list.iter().find(|&&(_, l)| solver.value(l) == Some(true)).map(|&(v, _)| v)
                };
                let (s, t) = (pick(&enc.starts[p]).expect("a start"), pick(&enc.ends[p]).expect("an end"));
                paths.push(extract(g, &used, s, t, c).expect("model paths are connected"));
            }
            SatOutcome { status: Status::Sat, witness: Some(Routing::new(paths).canonical()), stats }
        }
    }
}
