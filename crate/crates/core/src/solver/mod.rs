//! Exhaustive edge-/arc-disjoint paths search honoring non-crossing
//! vertices and crossing-exempt classes.
//!
//! The single-threaded search is the reference. With `threads > 1` the
//! routings of the first slot are collected as work items, searched in
//! parallel, and merged in item order, which reproduces the sequential
//! visiting order, node counts and budget verdict exactly.

mod sat;
mod search;

use std::collections::{BTreeSet, VecDeque};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::instance::{path_end, Instance, Routing};

use search::{Flow, Options, Prepared, Searcher, Visitor};

/// Default node budget when neither the policy nor `HARDPATHS_BUDGET`
/// says otherwise.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Stack size for search threads; the recursion depth is the number of
/// routed edges.
const STACK: usize = 256 << 20;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Status only.
    Decide,
    /// Status and the first routing found.
    Witness,
    /// Status and every routing.
    Enumerate,
}

/// Which complete procedure answers a query.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Path-by-path backtracking; the reference, and the only engine that
    /// enumerates. The budget counts search nodes.
    #[default]
    Backtrack,
    /// CDCL satisfiability for decide and witness queries. The budget
    /// counts conflicts.
    Sat,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchPolicy {
    pub mode: Mode,
    #[serde(default)]
    pub engine: Engine,
    pub node_budget: u64,
    /// Capacity pruning on registered cuts.
    pub pruning: bool,
    /// Per-class max-flow relaxation on the free edges.
    pub flow_bound: bool,
    /// Emit one routing per same-class path permutation.
    pub canonicalization: bool,
    pub threads: usize,
}

impl Default for SearchPolicy {
    fn default() -> Self {
        SearchPolicy {
            mode: Mode::Decide,
            engine: Engine::Backtrack,
            node_budget: DEFAULT_BUDGET,
            pruning: true,
            flow_bound: true,
            canonicalization: true,
            threads: 1,
        }
    }
}

impl SearchPolicy {
    pub fn new(mode: Mode) -> Self {
        SearchPolicy { mode, ..Default::default() }
    }

    /// Default policy with the budget taken from `HARDPATHS_BUDGET` when set.
    pub fn from_env(mode: Mode) -> Result<Self> {
        let mut p = SearchPolicy::new(mode);
        if let Some(b) = budget_from_env()? {
            p.node_budget = b;
        }
        Ok(p)
    }

    pub fn budget(mut self, b: u64) -> Self {
        self.node_budget = b;
        self
    }

    pub fn engine(mut self, e: Engine) -> Self {
        self.engine = e;
        self
    }

    pub fn threads(mut self, t: usize) -> Self {
        self.threads = t.max(1);
        self
    }

    pub fn pruning(mut self, on: bool) -> Self {
        self.pruning = on;
        self
    }

    pub fn flow_bound(mut self, on: bool) -> Self {
        self.flow_bound = on;
        self
    }

    pub fn canonical(mut self, on: bool) -> Self {
        self.canonicalization = on;
        self
    }
}

/// Parses a budget such as `100000`, `1e8` or `2.5e6`.
pub fn parse_budget(s: &str) -> Result<u64> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(f) if f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f <= u64::MAX as f64 => Ok(f as u64),
        _ => Err(Error::Input(format!("invalid node budget `{s}`"))),
    }
}

pub fn budget_from_env() -> Result<Option<u64>> {
    match std::env::var("HARDPATHS_BUDGET") {
        Ok(s) => parse_budget(&s).map(Some),
        Err(_) => Ok(None),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Sat,
    Unsat,
    BudgetExceeded,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub cut_prunes: u64,
    pub flow_prunes: u64,
    pub solutions: u64,
    /// Wall time; left out of serialized output so that it stays
    /// deterministic.
    #[serde(skip)]
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: Status,
    pub witnesses: Vec<Routing>,
    pub stats: SolveStats,
}

/// Cuts registered for capacity pruning, each given by its inside set `U`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSet {
    pub cuts: Vec<Vec<VertexId>>,
}

impl CutSet {
    pub fn none() -> Self {
        CutSet::default()
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }
}

/// Checks and registers cuts `delta(U)` for the instance.
pub fn register_cuts(inst: &Instance, cuts: Vec<Vec<VertexId>>) -> Result<CutSet> {
    let mut out = Vec::with_capacity(cuts.len());
    for (i, mut u) in cuts.into_iter().enumerate() {
        if let Some(v) = u.iter().find(|v| !inst.graph.contains_vertex(**v)) {
            return Err(Error::Input(format!("cut {i} names unknown vertex {}", v.0)));
        }
        u.sort();
        u.dedup();
        out.push(u);
    }
    Ok(CutSet { cuts: out })
}

/// Whether a search should go on after a routing.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Visit {
    Continue,
    Stop,
}

/// Outcome of [`search`].
#[derive(Clone, Debug)]
pub struct SearchSummary {
    /// `Sat` when at least one routing was visited, `Unsat` when none exists,
    /// `BudgetExceeded` when the search was cut short by the budget.
    pub status: Status,
    /// The routing on which the visitor asked to stop, if any. With several
    /// workers this is still the first such routing in sequential order.
    pub stopped_at: Option<Routing>,
    pub stats: SolveStats,
}

struct Collect<'f> {
    visit: &'f (dyn Fn(&Routing) -> Visit + Sync),
    keep: bool,
    stop_on_first: bool,
    out: Vec<Routing>,
    count: u64,
    stopped: Option<Routing>,
}

impl Visitor for Collect<'_> {
    fn solution(&mut self, s: &Searcher<'_>) -> bool {
        let r = s.routing();
        self.count += 1;
        let stop = (self.visit)(&r) == Visit::Stop;
        if stop {
            self.stopped = Some(r.clone());
        }
        if self.keep {
            self.out.push(r);
        }
        stop || self.stop_on_first
    }
}

/// First-slot prefixes with the phase-one counters at the moment each was
/// reached: `(nodes, cut prunes, flow prunes, prefix)`.
struct Prefixes(Vec<(u64, u64, u64, Vec<(u32, Vec<u32>)>)>);

impl Visitor for Prefixes {
    fn solution(&mut self, s: &Searcher<'_>) -> bool {
        self.0.push((s.nodes, s.cut_prunes, s.flow_prunes, s.prefix()));
        false
    }
}

struct EngineOut {
    exceeded: bool,
    stats: SolveStats,
    routings: Vec<Routing>,
    stopped: Option<Routing>,
}

fn options(policy: &SearchPolicy, budget: u64) -> Options {
    Options {
        budget,
        flow_bound: policy.flow_bound,
        cut_pruning: policy.pruning,
        canonical: policy.canonicalization,
        check_emissions: cfg!(debug_assertions),
    }
}

fn on_big_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(STACK)
            .spawn_scoped(s, f)
            .expect("spawning search thread")
            .join()
            .expect("search thread panicked")
    })
}

fn engine(
    inst: &Instance,
    policy: &SearchPolicy,
    cuts: &CutSet,
    visit: &(dyn Fn(&Routing) -> Visit + Sync),
    keep: bool,
    stop_on_first: bool,
) -> EngineOut {
    let cut_list: &[Vec<VertexId>] = if policy.pruning { &cuts.cuts } else { &[] };
    let prep = Prepared::new(inst, cut_list);
    let slots = prep.slot_class.len();
    let budget = policy.node_budget;
    let new_collect = || Collect { visit, keep, stop_on_first, out: Vec::new(), count: 0, stopped: None };

    if policy.threads <= 1 || slots < 2 {
        return on_big_stack(|| {
            let mut s = Searcher::new(&prep, inst, options(policy, budget));
            let mut c = new_collect();
            let flow = s.run(0, &mut c);
            EngineOut {
                exceeded: flow == Flow::Abort,
                stats: SolveStats {
                    nodes: s.nodes.min(budget),
                    cut_prunes: s.cut_prunes,
                    flow_prunes: s.flow_prunes,
                    solutions: c.count,
                    elapsed_ms: 0.0,
                },
                routings: c.out,
                stopped: c.stopped,
            }
        });
    }

    // Phase 1: every feasible first path becomes a work item.
    let (flow0, items, stats) = on_big_stack(|| {
        let mut s = Searcher::new(&prep, inst, options(policy, budget));
        s.set_split(1);
        let mut pre = Prefixes(Vec::new());
        let flow = s.run(0, &mut pre);
        (
            flow,
            pre.0,
            SolveStats { nodes: s.nodes, cut_prunes: s.cut_prunes, flow_prunes: s.flow_prunes, ..Default::default() },
        )
    });
    let phase1 = stats.clone();
    let stop_index = AtomicUsize::new(usize::MAX);
    struct ItemOut {
        flow: Flow,
        nodes: u64,
        cut_prunes: u64,
        flow_prunes: u64,
        count: u64,
        routings: Vec<Routing>,
        stopped: Option<Routing>,
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(policy.threads)
        .stack_size(STACK)
        .build()
        .expect("building search pool");
    let outs: Vec<Option<ItemOut>> = pool.install(|| {
        items
            .par_iter()
            .enumerate()
            .map(|(i, (pre_nodes, _, _, prefix))| {
                if i > stop_index.load(Ordering::Relaxed) {
                    return None;
                }
                let mut s = Searcher::new(&prep, inst, options(policy, budget.saturating_sub(*pre_nodes)));
                s.replay(prefix);
                let mut c = new_collect();
                let flow = s.run(1, &mut c);
                if flow != Flow::Continue {
                    stop_index.fetch_min(i, Ordering::Relaxed);
                }
                Some(ItemOut {
                    flow,
                    nodes: s.nodes,
                    cut_prunes: s.cut_prunes,
                    flow_prunes: s.flow_prunes,
                    count: c.count,
                    routings: c.out,
                    stopped: c.stopped,
                })
            })
            .collect()
    });
    // Replay the sequential order: item i's subtree is searched after the
    // phase-one nodes that preceded it and after all earlier subtrees.
    let mut routings = Vec::new();
    let mut stopped = None;
    let (mut nodes, mut cut_prunes, mut flow_prunes, mut solutions) = (0u64, 0u64, 0u64, 0u64);
    for ((pre_nodes, pre_cut, pre_flow, _), o) in items.iter().zip(outs) {
        let o = o.expect("an item before the stop point was skipped");
        nodes += o.nodes;
        cut_prunes += o.cut_prunes;
        flow_prunes += o.flow_prunes;
        let total = pre_nodes + nodes;
        if o.flow == Flow::Abort || total > budget {
            let stats = SolveStats {
                nodes: budget,
                cut_prunes: pre_cut + cut_prunes,
                flow_prunes: pre_flow + flow_prunes,
                solutions: solutions + o.count,
                elapsed_ms: 0.0,
            };
            return EngineOut { exceeded: true, stats, routings, stopped: None };
        }
        solutions += o.count;
        routings.extend(o.routings);
        if o.flow == Flow::Stop {
            stopped = o.stopped;
            let stats = SolveStats {
                nodes: total,
                cut_prunes: pre_cut + cut_prunes,
                flow_prunes: pre_flow + flow_prunes,
                solutions,
                elapsed_ms: 0.0,
            };
            return EngineOut { exceeded: false, stats, routings, stopped };
        }
    }
    let total = phase1.nodes + nodes;
    let exceeded = flow0 == Flow::Abort || total > budget;
    let stats = SolveStats {
        nodes: total.min(budget),
        cut_prunes: phase1.cut_prunes + cut_prunes,
        flow_prunes: phase1.flow_prunes + flow_prunes,
        solutions,
        elapsed_ms: 0.0,
    };
    EngineOut { exceeded, stats, routings, stopped }
}

/// Runs the search, calling `visit` on every routing in search order
/// (from several threads when `policy.threads > 1`). `policy.mode` is
/// ignored.
pub fn search(
    inst: &Instance,
    policy: &SearchPolicy,
    cuts: &CutSet,
    visit: &(dyn Fn(&Routing) -> Visit + Sync),
) -> Result<SearchSummary> {
    check_policy(inst, cuts)?;
    let t0 = Instant::now();
    let out = engine(inst, policy, cuts, visit, false, false);
    let mut stats = out.stats;
    stats.elapsed_ms = t0.elapsed().as_secs_f64() * 1e3;
    let status = if out.stopped.is_some() || (!out.exceeded && stats.solutions > 0) {
        Status::Sat
    } else if out.exceeded {
        Status::BudgetExceeded
    } else {
        Status::Unsat
    };
    Ok(SearchSummary { status, stopped_at: out.stopped, stats })
}

fn check_policy(inst: &Instance, cuts: &CutSet) -> Result<()> {
    for u in &cuts.cuts {
        if u.iter().any(|v| !inst.graph.contains_vertex(*v)) {
            return Err(Error::Input("registered cut names an unknown vertex".into()));
        }
    }
    Ok(())
}

/// Solves without registered cuts.
pub fn solve(inst: &Instance, policy: &SearchPolicy) -> Result<SolveResult> {
    solve_with_cuts(inst, policy, &CutSet::none())
}

pub fn solve_with_cuts(inst: &Instance, policy: &SearchPolicy, cuts: &CutSet) -> Result<SolveResult> {
    check_policy(inst, cuts)?;
    let t0 = Instant::now();
    if policy.engine == Engine::Sat {
        if policy.mode == Mode::Enumerate {
            return Err(Error::Precondition("enumeration needs the backtracking engine".into()));
        }
        let out = sat::decide(inst, policy, cuts);
        let mut stats = out.stats;
        stats.elapsed_ms = t0.elapsed().as_secs_f64() * 1e3;
        let witnesses = match (policy.mode, out.witness) {
            (Mode::Witness, Some(w)) => {
                debug_assert!(crate::instance::validate_routing(inst, &w).is_valid());
                vec![w]
            }
            _ => Vec::new(),
        };
        return Ok(SolveResult { status: out.status, witnesses, stats });
    }
    let cont = |_: &Routing| Visit::Continue;
    let enumerate = policy.mode == Mode::Enumerate;
    let out = engine(inst, policy, cuts, &cont, policy.mode != Mode::Decide, !enumerate);
    let mut stats = out.stats;
    stats.elapsed_ms = t0.elapsed().as_secs_f64() * 1e3;
    let found = !out.routings.is_empty() || stats.solutions > 0;
    let status = if enumerate {
        if out.exceeded {
            Status::BudgetExceeded
        } else if found {
            Status::Sat
        } else {
            Status::Unsat
        }
    } else if found {
        Status::Sat
    } else if out.exceeded {
        Status::BudgetExceeded
    } else {
        Status::Unsat
    };
    let witnesses = if status == Status::Sat {
        let mut w: Vec<Routing> = out.routings.iter().map(Routing::canonical).collect();
        if enumerate {
            w.sort();
            w.dedup();
        }
        w
    } else {
        Vec::new()
    };
    Ok(SolveResult { status, witnesses, stats })
}

/// Source-to-sink pairs of one routing, per class, each list sorted.
pub type Pairing = Vec<Vec<(VertexId, VertexId)>>;

#[derive(Clone, Debug)]
pub struct PairingResult {
    pub status: Status,
    pub pairings: BTreeSet<Pairing>,
    pub stats: SolveStats,
}

pub fn pairing_of(inst: &Instance, r: &Routing) -> Result<Pairing> {
    let mut out = vec![Vec::new(); inst.demands.len()];
    for p in &r.paths {
        out[p.class].push((p.start, path_end(&inst.graph, p)?));
    }
    for v in &mut out {
        v.sort();
    }
    Ok(out)
}

/// The distinct endpoint pairings realized over all solutions.
pub fn endpoint_pairings(inst: &Instance, policy: &SearchPolicy, cuts: &CutSet) -> Result<PairingResult> {
    let set = Mutex::new(BTreeSet::new());
    let visit = |r: &Routing| {
        let p = pairing_of(inst, r).expect("solver paths are well formed");
        set.lock().unwrap().insert(p);
        Visit::Continue
    };
    let s = search(inst, policy, cuts, &visit)?;
    let pairings = if s.status == Status::BudgetExceeded { BTreeSet::new() } else { set.into_inner().unwrap() };
    Ok(PairingResult { status: s.status, pairings, stats: s.stats })
}

/// Whether some target is reachable from some source in the graph without
/// the routing's edges, ignoring arc directions.
pub fn complement_reachable(inst: &Instance, routing: &Routing, sources: &[VertexId], targets: &[VertexId]) -> bool {
    let g = &inst.graph;
    let mut removed = vec![false; g.edge_count()];
    for e in routing.used_edges() {
        if e.index() < removed.len() {
            removed[e.index()] = true;
        }
    }
    let mut target = vec![false; g.vertex_count()];
    for t in targets {
        target[t.index()] = true;
    }
    let mut seen = vec![false; g.vertex_count()];
    let mut queue: VecDeque<VertexId> = VecDeque::new();
    for &s in sources {
        if target[s.index()] {
            return true;
        }
        if !seen[s.index()] {
            seen[s.index()] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &e in g.rotation(v) {
            if removed[e.index()] {
                continue;
            }
            let w = g.edge(e).other(v);
            if target[w.index()] {
                return true;
            }
            if !seen[w.index()] {
                seen[w.index()] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{standard, GadgetKind};
    use crate::graph::GraphBuilder;
    use crate::instance::DemandClass;

    fn single(kind: GadgetKind, from: &str, to: &str) -> Instance {
        let g = standard(kind).graph.clone();
        let d = Instance::class_by_names(&g, &[from], &[to], 1).unwrap();
        Instance::new(g, vec![d]).unwrap()
    }

    #[test]
    fn yes_and_no_gadgets() {
        let p = SearchPolicy::default();
        assert_eq!(solve(&single(GadgetKind::Yes, "c", "b'"), &p).unwrap().status, Status::Sat);
        assert_eq!(solve(&single(GadgetKind::No, "c", "b'"), &p).unwrap().status, Status::Unsat);
    }

    #[test]
    fn zero_demand_is_trivially_routable() {
        let inst = Instance::new(standard(GadgetKind::Xch).graph.clone(), vec![]).unwrap();
        let r = solve(&inst, &SearchPolicy::new(Mode::Witness)).unwrap();
        assert_eq!(r.status, Status::Sat);
        assert_eq!(r.witnesses, vec![Routing::default()]);
    }

    #[test]
    fn budget_is_never_reported_as_unsat() {
        let inst = single(GadgetKind::No, "c", "b'");
        let r = solve(&inst, &SearchPolicy::default().budget(1).flow_bound(false)).unwrap();
        assert_eq!(r.status, Status::BudgetExceeded);
        assert!(r.witnesses.is_empty());
    }

    fn cycle4() -> Instance {
        // square a-b-c-d with a diagonal a-c
        let mut b = GraphBuilder::new(false);
        let v: Vec<usize> = ["a", "b", "c", "d"].iter().map(|n| b.add_vertex(n, None)).collect();
        for (x, y) in [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)] {
            b.add_edge(v[x], v[y]);
        }
        let g = b.build().unwrap();
        let d = DemandClass::new(vec![g.require("a").unwrap()], vec![g.require("c").unwrap()], 3);
        Instance::new(g, vec![d]).unwrap()
    }

    #[test]
    fn enumerate_counts_canonical_solutions() {
        let inst = cycle4();
        let r = solve(&inst, &SearchPolicy::new(Mode::Enumerate)).unwrap();
        assert_eq!(r.status, Status::Sat);
        assert_eq!(r.witnesses.len(), 1);
        let raw = solve(&inst, &SearchPolicy::new(Mode::Enumerate).canonical(false)).unwrap();
        assert_eq!(raw.stats.solutions, 6);
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = standard(GadgetKind::Xch).graph.clone();
        let gd = standard(GadgetKind::Xch);
        let names = |v: &[String]| v.iter().map(|n| g.require(n).unwrap()).collect::<Vec<_>>();
        let d = vec![
            DemandClass::new(names(&gd.sides.top), names(&gd.sides.bottom), 2),
            DemandClass::new(names(&gd.sides.left), names(&gd.sides.right), 2),
        ];
        let inst = Instance::new(g, d).unwrap();
        let seq = solve(&inst, &SearchPolicy::new(Mode::Enumerate)).unwrap();
        let par = solve(&inst, &SearchPolicy::new(Mode::Enumerate).threads(4)).unwrap();
        assert_eq!(seq.witnesses, par.witnesses);
        assert_eq!(seq.stats.nodes, par.stats.nodes);
        for b in [1, 50, 500, seq.stats.nodes - 1, seq.stats.nodes] {
            let s = solve(&inst, &SearchPolicy::new(Mode::Decide).budget(b)).unwrap();
            let p = solve(&inst, &SearchPolicy::new(Mode::Decide).budget(b).threads(3)).unwrap();
            assert_eq!(s.status, p.status, "budget {b}");
        }
    }

    #[test]
    fn complement_reachability() {
        let inst = cycle4();
        let (a, c) = (inst.graph.require("a").unwrap(), inst.graph.require("c").unwrap());
        assert!(complement_reachable(&inst, &Routing::default(), &[a], &[c]));
        let r = solve(&inst, &SearchPolicy::new(Mode::Witness)).unwrap();
        assert!(!complement_reachable(&inst, &r.witnesses[0], &[a], &[c]));
    }

    #[test]
    fn sat_engine_agrees_on_gadgets() {
        for kind in [GadgetKind::Xch, GadgetKind::Lic, GadgetKind::Yes, GadgetKind::No] {
            let gd = standard(kind);
            let g = gd.graph.clone();
            let names = |v: &[String]| v.iter().map(|n| g.require(n).unwrap()).collect::<Vec<_>>();
            for (vc, hc) in [(1, 1), (2, 1), (2, 2), (3, 1), (1, 3)] {
                if gd.sides.top.is_empty() || gd.sides.left.is_empty() {
                    continue;
                }
                let d = vec![
                    DemandClass::new(names(&gd.sides.top), names(&gd.sides.bottom), vc),
                    DemandClass::new(names(&gd.sides.left), names(&gd.sides.right), hc),
                ];
                let inst = Instance::new(g.clone(), d).unwrap();
                let bt = solve(&inst, &SearchPolicy::new(Mode::Decide)).unwrap();
                let sat = solve(&inst, &SearchPolicy::new(Mode::Witness).engine(Engine::Sat)).unwrap();
                assert_eq!(bt.status, sat.status, "{kind:?} {vc}/{hc}");
                if sat.status == Status::Sat {
                    assert!(crate::instance::validate_routing(&inst, &sat.witnesses[0]).is_valid());
                }
            }
        }
        assert_eq!(
            solve(&single(GadgetKind::No, "c", "b'"), &SearchPolicy::default().engine(Engine::Sat)).unwrap().status,
            Status::Unsat
        );
        assert_eq!(
            solve(&single(GadgetKind::Yes, "c", "b'"), &SearchPolicy::default().engine(Engine::Sat)).unwrap().status,
            Status::Sat
        );
    }

    #[test]
    fn sat_engine_rejects_enumeration() {
        let p = SearchPolicy::new(Mode::Enumerate).engine(Engine::Sat);
        assert!(solve(&cycle4(), &p).is_err());
        let w = solve(&cycle4(), &SearchPolicy::new(Mode::Witness).engine(Engine::Sat)).unwrap();
        assert_eq!(w.witnesses[0].paths.len(), 3);
    }

    #[test]
    fn budget_parsing() {
        assert_eq!(parse_budget("1e6").unwrap(), 1_000_000);
        assert_eq!(parse_budget("12_000").unwrap(), 12_000);
        assert!(parse_budget("abc").is_err());
        assert!(parse_budget("1.5").is_err());
    }
}
