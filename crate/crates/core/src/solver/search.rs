//! The backtracking engine.
//!
//! Paths are routed one slot at a time (a class of count `k` owns `k`
//! consecutive slots, in declaration order). A path grows from a source by
//! trying free edges in increasing id order; it may end at any sink of its
//! class. Paths are vertex-simple. At a non-crossing vertex a new pass must
//! not interleave any recorded pass of a non-exempt path.
//!
//! Two relaxations prune the tree: a per-class max-flow bound on the free
//! edges (with non-crossing vertices split into the port groups that can
//! still be joined without a crossing), and the residual capacity of the
//! registered cuts against the demand that still has to cross them.

use crate::crossing::interleaved;
use crate::graph::{EdgeId, RotationGraph, VertexId};
use crate::instance::{Instance, RoutedPath, Routing};

const NONE: u32 = u32::MAX;

/// Read-only search data shared by all workers.
pub(crate) struct Prepared {
    pub directed: bool,
    pub n: usize,
    /// `(tail, head)` per edge.
    pub ends: Vec<[u32; 2]>,
    /// Rotation position of each edge at its tail and at its head.
    pub slot: Vec<[u32; 2]>,
    /// Edges that can be walked away from a vertex, ascending by id, with
    /// the vertex reached.
    pub adj: Vec<Vec<(u32, u32)>>,
    /// All incident edges in rotation order.
    pub inc: Vec<Vec<u32>>,
    /// First flow node of each vertex; a vertex owns `degree` node ids.
    pub port_base: Vec<u32>,
    pub node_vertex: Vec<u32>,
    pub noncrossing: Vec<bool>,
    pub classes: Vec<PClass>,
    /// Class of every slot.
    pub slot_class: Vec<usize>,
    /// Index of the first slot of each class.
    pub class_first_slot: Vec<usize>,
    pub cuts: Vec<PCut>,
    /// Cuts containing each edge, with `true` when the edge leaves the
    /// inside (tail inside).
    pub edge_cuts: Vec<Vec<(u32, bool)>>,
}

pub(crate) struct PClass {
    pub is_sink: Vec<bool>,
    pub sources: Vec<u32>,
    pub count: u32,
    pub exempt: bool,
}

pub(crate) struct PCut {
    pub inside: Vec<bool>,
    pub out_cap: i64,
    pub in_cap: i64,
    /// Per class: +1 paths must leave, -1 must enter, 0 stay, `None` unknown.
    pub class_dir: Vec<Option<i8>>,
    /// Per class, side of the sinks: Some(true) all inside, Some(false) all
    /// outside, None mixed.
    pub sinks_inside: Vec<Option<bool>>,
}

impl Prepared {
    pub fn new(inst: &Instance, cuts: &[Vec<VertexId>]) -> Prepared {
        let g: &RotationGraph = &inst.graph;
        let n = g.vertex_count();
        let m = g.edge_count();
        let ends: Vec<[u32; 2]> = g.edges().iter().map(|e| [e.tail.0, e.head.0]).collect();
        let slot: Vec<[u32; 2]> = (0..m)
            .map(|i| {
                let e = EdgeId(i as u32);
                let ed = g.edge(e);
                [g.slot(e, ed.tail) as u32, g.slot(e, ed.head) as u32]
            })
            .collect();
        let mut adj = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut port_base = Vec::with_capacity(n);
        let mut node_vertex = Vec::new();
        for v in g.vertices() {
            let mut a: Vec<(u32, u32)> = g.leaving(v).map(|e| (e.0, g.edge(e).other(v).0)).collect();
            a.sort();
            adj[v.index()] = a;
            inc[v.index()] = g.rotation(v).iter().map(|e| e.0).collect();
            port_base.push(node_vertex.len() as u32);
            for _ in 0..g.degree(v).max(1) {
                node_vertex.push(v.0);
            }
        }
        let classes: Vec<PClass> = inst
            .demands
            .iter()
            .map(|d| {
                let mut is_sink = vec![false; n];
                for t in &d.sinks {
                    is_sink[t.index()] = true;
                }
                PClass {
                    is_sink,
                    sources: d.sources.iter().map(|v| v.0).collect(),
                    count: d.count,
                    exempt: d.crossing_exempt,
                }
            })
            .collect();
        let mut slot_class = Vec::new();
        let mut class_first_slot = Vec::new();
        for (c, d) in inst.demands.iter().enumerate() {
            class_first_slot.push(slot_class.len());
            for _ in 0..d.count {
                slot_class.push(c);
            }
        }
        let mut edge_cuts = vec![Vec::new(); m];
        let mut pcuts = Vec::new();
        for (ci, u) in cuts.iter().enumerate() {
            let mut inside = vec![false; n];
            for v in u {
                inside[v.index()] = true;
            }
            let (mut out_cap, mut in_cap) = (0i64, 0i64);
            for (i, e) in ends.iter().enumerate() {
                let (t, h) = (inside[e[0] as usize], inside[e[1] as usize]);
                if t != h {
                    edge_cuts[i].push((ci as u32, t));
                    if t {
                        out_cap += 1;
                    } else {
                        in_cap += 1;
                    }
                }
            }
            let side = |vs: &[VertexId]| -> Option<bool> {
                let k = vs.iter().filter(|v| inside[v.index()]).count();
                if k == vs.len() {
                    Some(true)
                } else if k == 0 {
                    Some(false)
                } else {
                    None
                }
            };
            let mut class_dir = Vec::new();
            let mut sinks_inside = Vec::new();
            for d in &inst.demands {
                let (s, t) = (side(&d.sources), side(&d.sinks));
                class_dir.push(match (s, t) {
                    (Some(true), Some(false)) => Some(1),
                    (Some(false), Some(true)) => Some(-1),
                    (Some(a), Some(b)) if a == b => Some(0),
                    _ => None,
                });
                sinks_inside.push(t);
            }
            pcuts.push(PCut { inside, out_cap, in_cap, class_dir, sinks_inside });
        }
        Prepared {
            directed: g.is_directed(),
            n,
            ends,
            slot,
            adj,
            inc,
            port_base,
            node_vertex,
            noncrossing: g.vertices().map(|v| g.is_noncrossing(v)).collect(),
            classes,
            slot_class,
            class_first_slot,
            cuts: pcuts,
            edge_cuts,
        }
    }

    #[inline]
    fn slot_at(&self, e: u32, v: u32) -> u32 {
        let s = &self.ends[e as usize];
        if s[0] == v {
            self.slot[e as usize][0]
        } else {
            self.slot[e as usize][1]
        }
    }

    #[inline]
    fn other(&self, e: u32, v: u32) -> u32 {
        let s = &self.ends[e as usize];
        if s[0] == v {
            s[1]
        } else {
            s[0]
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flow {
    Continue,
    /// The visitor asked to stop.
    Stop,
    /// Node budget exhausted.
    Abort,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Options {
    pub budget: u64,
    pub flow_bound: bool,
    pub cut_pruning: bool,
    pub canonical: bool,
    pub check_emissions: bool,
}

/// Per-worker mutable search state.
pub(crate) struct Searcher<'a> {
    p: &'a Prepared,
    inst: &'a Instance,
    opt: Options,
    used: Vec<bool>,
    on_path: Vec<bool>,
    passes: Vec<Vec<(u32, u32)>>,
    group: Vec<u8>,
    cut_out: Vec<i64>,
    cut_in: Vec<i64>,
    /// Completed paths and the one in progress.
    starts: Vec<u32>,
    edges: Vec<Vec<u32>>,
    pub nodes: u64,
    pub flow_prunes: u64,
    pub cut_prunes: u64,
    // flow scratch
    fl: Vec<i8>,
    touched: Vec<u32>,
    seen: Vec<u32>,
    gen: u32,
    parent_edge: Vec<u32>,
    parent_node: Vec<u32>,
    queue: Vec<u32>,
    /// When set, the search stops descending once slot `split_at` is
    /// reached and reports the prefix instead.
    split_at: Option<usize>,
}

/// Something that consumes complete routings (or split prefixes).
pub(crate) trait Visitor {
    fn solution(&mut self, s: &Searcher<'_>) -> bool;
}

impl<'a> Searcher<'a> {
    pub fn new(p: &'a Prepared, inst: &'a Instance, opt: Options) -> Self {
        let m = p.ends.len();
        let nodes_total = p.node_vertex.len();
        Searcher {
            p,
            inst,
            opt,
            used: vec![false; m],
            on_path: vec![false; p.n],
            passes: vec![Vec::new(); p.n],
            group: vec![0; nodes_total],
            cut_out: p.cuts.iter().map(|c| c.out_cap).collect(),
            cut_in: p.cuts.iter().map(|c| c.in_cap).collect(),
            starts: Vec::new(),
            edges: Vec::new(),
            nodes: 0,
            flow_prunes: 0,
            cut_prunes: 0,
            fl: vec![0; m],
            touched: Vec::new(),
            seen: vec![0; nodes_total],
            gen: 0,
            parent_edge: vec![NONE; nodes_total],
            parent_node: vec![NONE; nodes_total],
            queue: Vec::new(),
            split_at: None,
        }
    }

    pub fn set_split(&mut self, k: usize) {
        self.split_at = Some(k);
    }

    /// The routed paths so far (complete ones plus the one in progress).
    pub fn routing(&self) -> Routing {
        Routing::new(
            self.starts
                .iter()
                .zip(&self.edges)
                .enumerate()
                .map(|(k, (&s, es))| RoutedPath {
                    class: self.p.slot_class[k],
                    start: VertexId(s),
                    edges: es.iter().map(|&e| EdgeId(e)).collect(),
                })
                .collect(),
        )
    }

    pub fn prefix(&self) -> Vec<(u32, Vec<u32>)> {
        self.starts.iter().copied().zip(self.edges.iter().cloned()).collect()
    }

    /// Replays complete paths of a prefix (as produced under a split).
    pub fn replay(&mut self, prefix: &[(u32, Vec<u32>)]) {
        for (k, (s, es)) in prefix.iter().enumerate() {
            let c = self.p.slot_class[k];
            let exempt = self.p.classes[c].exempt;
            self.starts.push(*s);
            self.edges.push(Vec::new());
            let mut v = *s;
            let mut prev = NONE;
            for &e in es {
                self.take_edge(e, v, prev, exempt);
                self.edges.last_mut().unwrap().push(e);
                prev = e;
                v = self.p.other(e, v);
            }
        }
    }

    /// Runs the search from slot `k`.
    pub fn run(&mut self, k: usize, vis: &mut dyn Visitor) -> Flow {
        self.route_slot(k, vis)
    }

    fn route_slot(&mut self, k: usize, vis: &mut dyn Visitor) -> Flow {
        if k == self.p.slot_class.len() || self.split_at == Some(k) {
            if self.opt.check_emissions && self.split_at != Some(k) {
                let r = self.routing();
                let rep = crate::instance::validate_routing(self.inst, &r);
                assert!(rep.is_valid(), "solver emitted an invalid routing: {:?}", rep.violations);
            }
            return if vis.solution(self) { Flow::Stop } else { Flow::Continue };
        }
        let c = self.p.slot_class[k];
        for si in 0..self.p.classes[c].sources.len() {
            let s = self.p.classes[c].sources[si];
            self.starts.push(s);
            self.edges.push(Vec::new());
            self.on_path[s as usize] = true;
            let r = self.walk(k, s, NONE, vis);
            self.on_path[s as usize] = false;
            self.starts.pop();
            self.edges.pop();
            if r != Flow::Continue {
                return r;
            }
        }
        Flow::Continue
    }

    fn walk(&mut self, k: usize, v: u32, in_edge: u32, vis: &mut dyn Visitor) -> Flow {
        self.nodes += 1;
        if self.nodes > self.opt.budget {
            return Flow::Abort;
        }
        let c = self.p.slot_class[k];
        if self.opt.cut_pruning && !self.cuts_ok(k, v) {
            self.cut_prunes += 1;
            return Flow::Continue;
        }
        if self.opt.flow_bound && !self.flow_ok(k, v, in_edge != NONE) {
            self.flow_prunes += 1;
            return Flow::Continue;
        }
        let cls = &self.p.classes[c];
        let exempt = cls.exempt;
        if in_edge != NONE && cls.is_sink[v as usize] {
            let path: Vec<u32> = self.path_vertices(k);
            for &x in &path {
                self.on_path[x as usize] = false;
            }
            let r = self.route_slot(k + 1, vis);
            for &x in &path {
                self.on_path[x as usize] = true;
            }
            if r != Flow::Continue {
                return r;
            }
        }
        let min_first = if in_edge == NONE && self.opt.canonical && k > 0 && self.p.slot_class[k - 1] == c {
            self.edges[k - 1][0] + 1
        } else {
            0
        };
        let check_cross = in_edge != NONE && !exempt && self.p.noncrossing[v as usize];
        let in_slot = if check_cross { self.p.slot_at(in_edge, v) } else { 0 };
        let deg = self.p.adj[v as usize].len();
        for i in 0..deg {
            let (f, w) = self.p.adj[v as usize][i];
            if f < min_first || self.used[f as usize] || self.on_path[w as usize] {
                continue;
            }
            if check_cross {
                let fs = self.p.slot_at(f, v);
                if self.passes[v as usize].iter().any(|&(a, b)| interleaved(in_slot as usize, fs as usize, a as usize, b as usize)) {
                    continue;
                }
            }
            self.take_edge(f, v, in_edge, exempt);
            self.edges[k].push(f);
            self.on_path[w as usize] = true;
            let r = self.walk(k, w, f, vis);
            self.on_path[w as usize] = false;
            self.edges[k].pop();
            self.release_edge(f, v, in_edge, exempt);
            if r != Flow::Continue {
                return r;
            }
        }
        Flow::Continue
    }

    fn path_vertices(&self, k: usize) -> Vec<u32> {
        let mut v = self.starts[k];
        let mut out = vec![v];
        for &e in &self.edges[k] {
            v = self.p.other(e, v);
            out.push(v);
        }
        out
    }

    /// Marks `f` used when leaving `v`, recording the pass `(in_edge, f)`.
    fn take_edge(&mut self, f: u32, v: u32, in_edge: u32, exempt: bool) {
        self.used[f as usize] = true;
        for &(ci, out) in &self.p.edge_cuts[f as usize] {
            if out {
                self.cut_out[ci as usize] -= 1;
            } else {
                self.cut_in[ci as usize] -= 1;
            }
        }
        if in_edge != NONE && !exempt && self.p.noncrossing[v as usize] {
            let a = self.p.slot_at(in_edge, v);
            let b = self.p.slot_at(f, v);
            self.passes[v as usize].push((a, b));
            self.regroup(v);
        }
    }

    fn release_edge(&mut self, f: u32, v: u32, in_edge: u32, exempt: bool) {
        self.used[f as usize] = false;
        for &(ci, out) in &self.p.edge_cuts[f as usize] {
            if out {
                self.cut_out[ci as usize] += 1;
            } else {
                self.cut_in[ci as usize] += 1;
            }
        }
        if in_edge != NONE && !exempt && self.p.noncrossing[v as usize] {
            self.passes[v as usize].pop();
            self.regroup(v);
        }
    }

    /// Recomputes the port groups of a non-crossing vertex: two free edges
    /// share a group when some chain of free-edge pairs avoiding every
    /// recorded pass joins them.
    fn regroup(&mut self, v: u32) {
        let base = self.p.port_base[v as usize] as usize;
        let inc = &self.p.inc[v as usize];
        let d = inc.len();
        if self.passes[v as usize].is_empty() {
            for i in 0..d {
                self.group[base + i] = 0;
            }
            return;
        }
        let mut parent: Vec<usize> = (0..d).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for i in 0..d {
            for j in i + 1..d {
                let ok = self.passes[v as usize].iter().all(|&(a, b)| !interleaved(i, j, a as usize, b as usize));
                if ok {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
        for i in 0..d {
            self.group[base + i] = find(&mut parent, i) as u8;
        }
    }

    fn cuts_ok(&self, k: usize, head: u32) -> bool {
        let p = self.p;
        let c_now = p.slot_class[k];
        for (ci, cut) in p.cuts.iter().enumerate() {
            let (mut need_out, mut need_in) = (0i64, 0i64);
            // the path in progress
            if let Some(sinks_in) = cut.sinks_inside[c_now] {
                let head_in = cut.inside[head as usize];
                if head_in && !sinks_in {
                    need_out += 1;
                } else if !head_in && sinks_in {
                    need_in += 1;
                }
            }
            for (c, first) in p.class_first_slot.iter().enumerate().skip(c_now) {
                let total = p.classes[c].count as usize;
                let left = if c == c_now { first + total - (k + 1) } else { total };
                match cut.class_dir[c] {
                    Some(1) => need_out += left as i64,
                    Some(-1) => need_in += left as i64,
                    _ => {}
                }
            }
            let ok = if p.directed {
                need_out <= self.cut_out[ci] && need_in <= self.cut_in[ci]
            } else {
                need_out + need_in <= self.cut_out[ci] + self.cut_in[ci]
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn flow_ok(&mut self, k: usize, head: u32, started: bool) -> bool {
        let p = self.p;
        let c_now = p.slot_class[k];
        let ncls = p.classes.len();
        for c in c_now..ncls {
            let total = p.classes[c].count;
            let after = if c == c_now { (p.class_first_slot[c] + total as usize - (k + 1)) as u32 } else { total };
            let head_opt = if c == c_now { head } else { NONE };
            let need = after + u32::from(head_opt != NONE);
            if need == 0 {
                continue;
            }
            // A started path already standing on a sink can end right here.
            let head_done = head_opt != NONE && started && p.classes[c].is_sink[head as usize];
            if !self.max_flow_at_least(c, head_opt, head_done, after > 0, need) {
                return false;
            }
        }
        true
    }

    #[inline]
    fn node_of(&self, v: u32, slot: u32, exempt: bool) -> u32 {
        let base = self.p.port_base[v as usize];
        if exempt {
            base
        } else {
            base + self.group[(base + slot) as usize] as u32
        }
    }

    /// Augmenting-path max flow on the free edges, stopping at `need`.
    fn max_flow_at_least(&mut self, c: usize, head: u32, head_done: bool, use_sources: bool, need: u32) -> bool {
        let p = self.p;
        let exempt = p.classes[c].exempt;
        for &e in &self.touched {
            self.fl[e as usize] = 0;
        }
        self.touched.clear();
        // A head that is itself a source is covered by the unbounded sources.
        let head_is_source = use_sources && head != NONE && p.classes[c].sources.contains(&head);
        let mut head_avail = head != NONE && !head_done && !head_is_source;
        let mut found = u32::from(head_done);
        while found < need {
            self.gen = self.gen.wrapping_add(1);
            if self.gen == 0 {
                self.seen.iter_mut().for_each(|s| *s = 0);
                self.gen = 1;
            }
            let gen = self.gen;
            self.queue.clear();
            if head_avail {
                // The path in progress may leave through any free edge.
                let base = p.port_base[head as usize];
                let d = p.inc[head as usize].len() as u32;
                for i in 0..d.max(1) {
                    let node = if exempt { base } else { base + self.group[(base + i) as usize] as u32 };
                    if self.seen[node as usize] != gen {
                        self.seen[node as usize] = gen;
                        self.parent_edge[node as usize] = NONE;
                        self.queue.push(node);
                    }
                }
            }
            if use_sources {
                for &s in &p.classes[c].sources {
                    let base = p.port_base[s as usize];
                    let d = p.inc[s as usize].len() as u32;
                    for i in 0..d.max(1) {
                        let node = if exempt { base } else { base + self.group[(base + i) as usize] as u32 };
                        if self.seen[node as usize] != gen {
                            self.seen[node as usize] = gen;
                            self.parent_edge[node as usize] = NONE;
                            self.queue.push(node);
                        }
                    }
                }
            }
            let mut qi = 0;
            let mut hit = NONE;
            let mut hit_edge = NONE;
            'bfs: while qi < self.queue.len() {
                let x = self.queue[qi];
                qi += 1;
                let v = p.node_vertex[x as usize];
                let base = p.port_base[v as usize];
                let gx = x - base;
                let inc = &p.inc[v as usize];
                for (i, &e) in inc.iter().enumerate() {
                    if self.used[e as usize] {
                        continue;
                    }
                    if !exempt && self.group[(base + i as u32) as usize] as u32 != gx {
                        continue;
                    }
                    let ends = p.ends[e as usize];
                    let from_tail = ends[0] == v;
                    let f = self.fl[e as usize];
                    let ok = if p.directed {
                        if from_tail {
                            f == 0
                        } else {
                            f == 1
                        }
                    } else if from_tail {
                        f < 1
                    } else {
                        f > -1
                    };
                    if !ok {
                        continue;
                    }
                    let w = if from_tail { ends[1] } else { ends[0] };
                    let ws = if from_tail { p.slot[e as usize][1] } else { p.slot[e as usize][0] };
                    if p.classes[c].is_sink[w as usize] {
                        hit = x;
                        hit_edge = e;
                        break 'bfs;
                    }
                    let y = self.node_of(w, ws, exempt);
                    if self.seen[y as usize] == gen {
                        continue;
                    }
                    self.seen[y as usize] = gen;
                    self.parent_edge[y as usize] = e;
                    self.parent_node[y as usize] = x;
                    self.queue.push(y);
                }
            }
            if hit == NONE {
                return false;
            }
            // augment, starting with the hop into the sink
            let mut y = hit;
            let mut e = hit_edge;
            loop {
                let x = y;
                let v = p.node_vertex[x as usize];
                let from_tail = p.ends[e as usize][0] == v;
                let f = &mut self.fl[e as usize];
                if *f == 0 {
                    self.touched.push(e);
                }
                if from_tail {
                    *f += 1;
                } else {
                    *f -= 1;
                }
                e = self.parent_edge[x as usize];
                if e == NONE {
                    break;
                }
                y = self.parent_node[x as usize];
            }
            if head_avail && p.node_vertex[y as usize] == head {
                head_avail = false;
            }
            found += 1;
        }
        true
    }
}
