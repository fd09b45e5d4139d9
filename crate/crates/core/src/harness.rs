//! Mechanical checks of the gadget-level facts, one case per fact.
//!
//! | case | instance | expected |
//! |---|---|---|
//! | `L3_xch22` | XCH, two vertical + two horizontal paths | vertical pairings are exactly `s1→s'3, s2→s'4` and `s3→s'1, s4→s'2` |
//! | `L4_xch12` | XCH, `{s1,s2}` to `{s'1,s'2}` plus one horizontal path | unroutable |
//! | `L5_lic22` | LIC, two vertical + two horizontal paths | `{s'1,s'2}` unroutable, `{s'3,s'4}` routable, no spare path in any complement |
//! | `L6_lic12` | LIC, one horizontal path, vertical paths kept | both keep routings validate and the solver agrees |
//! | `L7_shift` | 1×3 LIC grid, eight classes plus a crossing-exempt `{y1,y2} → X'` path | unroutable |
//! | `L8_grid3` | 1×3 XCH grid, five `Y→Y'` paths and `x1→x'1`, `x2→x'2` | unroutable |
//! | `C1_tiny` | every formula with at most two variables and two clauses | clause grid, full grid and both transforms agree with brute force |
//! | `C2_routers` | IF, LL, TT, each `(a, a_i)` / `(b, b_j)` pair | routable iff `i = j` |
//! | `C3_vv` | VV, `(b2→b, a1→a)`; port facts of YES/NO/ON | unroutable; only YES has `c → b'` |
//! | `FIG2_crossing` | the two-path drawings | one crossing, one not |
//! | `EXPANSION_EQUIV` | generated degree-4 non-crossing instances | feasibility unchanged by expansion |
//!
//! How no-paths drift across many rows, why vertical paths use tight cuts
//! and where no-paths may end are statements about arbitrarily tall grids;
//! they have no case here.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cnf::CnfFormula;
use crate::crossing::detect_crossings;
use crate::error::{Error, Result};
use crate::expand::expand_instance;
use crate::gadgets::figures::{figure_demands, figure_routing_in, two_path_configuration, FigureId};
use crate::gadgets::{reachable_in, Gadget, GadgetKind, GadgetSet};
use crate::graph::{GraphBuilder, VertexId};
use crate::grid::{build_grid_with, standard_demand, ClassSpec, GridSpec};
use crate::instance::{validate_routing, DemandClass, Instance};
use crate::reduction::directed;
use crate::solver::{
    complement_reachable, pairing_of, register_cuts, solve, solve_with_cuts, CutSet, Engine, Mode,
    SearchPolicy, SolveStats, Status, DEFAULT_BUDGET,
};

pub const CASE_IDS: [&str; 11] = [
    "L3_xch22",
    "L4_xch12",
    "L5_lic22",
    "L6_lic12",
    "L7_shift",
    "L8_grid3",
    "C1_tiny",
    "C2_routers",
    "C3_vv",
    "FIG2_crossing",
    "EXPANSION_EQUIV",
];

/// Facts deliberately without a case.
pub const NOT_COVERED: &str =
    "no cases for row drift, vertical paths or no-path extremities: those facts concern whole grids of unbounded height";

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// Reduced generated families; every fixed case unchanged.
    Fast,
    Full,
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Profile::Fast),
            "full" => Ok(Profile::Full),
            _ => Err(Error::Input(format!("unknown profile `{s}` (fast or full)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub profile: Profile,
    /// Node budget per solver call.
    pub budget: u64,
    pub threads: usize,
    pub pruning: bool,
    pub gadgets: GadgetSet,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            profile: Profile::Full,
            budget: DEFAULT_BUDGET,
            threads: 1,
            pruning: true,
            gadgets: GadgetSet::standard(),
        }
    }
}

impl HarnessConfig {
    fn policy(&self, mode: Mode) -> SearchPolicy {
        SearchPolicy::new(mode).budget(self.budget).threads(self.threads).pruning(self.pruning)
    }

    fn gadget(&self, kind: GadgetKind) -> Result<&Gadget> {
        self.gadgets.get(kind)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub id: String,
    pub outcome: Outcome,
    /// What was checked and found, in words.
    pub detail: String,
    /// Canonical rendering of the case's solver outputs; identical across
    /// pruning settings and thread counts.
    pub output: String,
    /// Search nodes (backtracking) or conflicts (satisfiability) spent.
    pub nodes: u64,
    #[serde(skip)]
    pub elapsed_ms: f64,
}

/// Accumulates the verdict of one case.
struct Run {
    ok: bool,
    inconclusive: bool,
    notes: Vec<String>,
    output: Vec<String>,
    nodes: u64,
}

impl Run {
    fn new() -> Self {
        Run { ok: true, inconclusive: false, notes: Vec::new(), output: Vec::new(), nodes: 0 }
    }

    fn check(&mut self, cond: bool, what: impl Into<String>) {
        let what = what.into();
        if !cond {
            self.ok = false;
            self.notes.push(format!("FAILED {what}"));
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn out(&mut self, s: impl Into<String>) {
        self.output.push(s.into());
    }

    fn stats(&mut self, s: &SolveStats) {
        self.nodes += s.nodes;
    }

    /// Records a decided status; `None` when the budget ran out.
    fn status(&mut self, s: Status, stats: &SolveStats, what: &str) -> Option<bool> {
        self.stats(stats);
        self.out(format!("{what}: {s:?}"));
        match s {
            Status::Sat => Some(true),
            Status::Unsat => Some(false),
            Status::BudgetExceeded => {
                self.inconclusive = true;
                self.notes.push(format!("{what}: budget exhausted"));
                None
            }
        }
    }
}

fn ports(gd: &Gadget, list: &[&str]) -> Result<Vec<VertexId>> {
    list.iter().map(|n| gd.port(n)).collect()
}

fn side(gd: &Gadget, list: &[String]) -> Result<Vec<VertexId>> {
    list.iter().map(|n| gd.port(n)).collect()
}

/// Vertical pairings of every routing of two vertical and two horizontal
/// paths through XCH.
fn l3(cfg: &HarnessConfig, r: &mut Run) -> Result<()> {
    let gd = cfg.gadget(GadgetKind::Xch)?;
    let s = &gd.sides;
    let inst = Instance::new(
        gd.graph.clone(),
        vec![
            DemandClass::new(side(gd, &s.top)?, side(gd, &s.bottom)?, 2),
            DemandClass::new(side(gd, &s.left)?, side(gd, &s.right)?, 2),
        ],
    )?;
    let res = solve(&inst, &cfg.policy(Mode::Enumerate))?;
    if r.status(res.status, &res.stats, "enumeration").is_none() {
        return Ok(());
    }
    // The drawn shift routing is one of the enumerated solutions.
    match figure_routing_in(gd, FigureId::XchShift) {
        Ok(fig) => {
            let fig_inst = Instance::new(gd.graph.clone(), figure_demands(gd, FigureId::XchShift)?)?;
            r.check(validate_routing(&fig_inst, &fig).is_valid(), "xch_shift validates");
            r.check(res.witnesses.contains(&fig.canonical()), "xch_shift is among the enumerated routings");
        }
        Err(e) => r.check(false, format!("xch_shift transcribes onto the gadget: {e}")),
    }
    r.out(format!("solutions: {}", res.witnesses.len()));
    let pairings: std::collections::BTreeSet<_> =
        res.witnesses.iter().map(|w| pairing_of(&inst, w)).collect::<Result<_>>()?;
    let g = &inst.graph;
    let mut found: Vec<String> = pairings
        .iter()
        .map(|p| p[0].iter().map(|&(a, b)| format!("{}->{}", g.name(a), g.name(b))).collect::<Vec<_>>().join(" "))
        .collect();
    found.sort();
    found.dedup();
    r.out(format!("vertical pairings: {}", found.join(" | ")));
    let expected = vec!["s1->s'3 s2->s'4".to_string(), "s3->s'1 s4->s'2".to_string()];
    r.note(format!("vertical pairings found: {found:?}"));
    r.check(found == expected, "pairings are exactly the two shifts");
    Ok(())
}

fn xch12(cfg: &HarnessConfig, r: &mut Run) -> Result<()> {
    let gd = cfg.gadget(GadgetKind::Xch)?;
    let s = &gd.sides;
    for (sinks, want) in [(["s'1", "s'2"], false), (["s'3", "s'4"], true)] {
        let inst = Instance::new(
            gd.graph.clone(),
            vec![
                DemandClass::new(ports(gd, &["s1", "s2"])?, ports(gd, &sinks)?, 2),
                DemandClass::new(side(gd, &s.left)?, side(gd, &s.right)?, 1),
            ],
        )?;
        let res = solve(&inst, &cfg.policy(Mode::Decide))?;
        if let Some(sat) = r.status(res.status, &res.stats, &format!("s1,s2 -> {}", sinks.join(","))) {
            r.check(sat == want, format!("s1,s2 -> {} routable: {want}", sinks.join(",")));
        }
    }
    Ok(())
}

fn lic22(cfg: &HarnessConfig, r: &mut Run) -> Result<()> {
    let gd = cfg.gadget(GadgetKind::Lic)?;
    let s = &gd.sides;
    let h = || -> Result<DemandClass> { Ok(DemandClass::new(side(gd, &s.left)?, side(gd, &s.right)?, 2)) };
    let kept = Instance::new(
        gd.graph.clone(),
        vec![DemandClass::new(ports(gd, &["s1", "s2"])?, ports(gd, &["s'1", "s'2"])?, 2), h()?],
    )?;
    let res = solve(&kept, &cfg.policy(Mode::Decide))?;
    if let Some(sat) = r.status(res.status, &res.stats, "s1,s2 -> s'1,s'2") {
        r.check(!sat, "keeping with two horizontal paths is unroutable");
    }
    let shifted = Instance::new(
        gd.graph.clone(),
        vec![DemandClass::new(ports(gd, &["s1", "s2"])?, ports(gd, &["s'3", "s'4"])?, 2), h()?],
    )?;
    let res = solve(&shifted, &cfg.policy(Mode::Enumerate))?;
    if r.status(res.status, &res.stats, "s1,s2 -> s'3,s'4").is_none() {
        return Ok(());
    }
    r.check(!res.witnesses.is_empty(), "shifting with two horizontal paths is routable");
    let all_src: Vec<VertexId> = side(gd, &s.top)?.into_iter().chain(side(gd, &s.left)?).collect();
    let all_snk: Vec<VertexId> = side(gd, &s.bottom)?.into_iter().chain(side(gd, &s.right)?).collect();
    let spare = res.witnesses.iter().filter(|w| complement_reachable(&shifted, w, &all_src, &all_snk)).count();
    r.out(format!("solutions: {}, with a spare path: {spare}", res.witnesses.len()));
    r.note(format!("{} solutions enumerated", res.witnesses.len()));
    r.check(spare == 0, "no solution leaves room for another top/left to bottom/right path");
    Ok(())
}

fn lic12(cfg: &HarnessConfig, r: &mut Run) -> Result<()> {
    let gd = cfg.gadget(GadgetKind::Lic)?;
    for id in [FigureId::LicKeepLeft, FigureId::LicKeepRight] {
        let inst = Instance::new(gd.graph.clone(), figure_demands(gd, id)?)?;
        match figure_routing_in(gd, id) {
            Ok(routing) => {
                let rep = validate_routing(&inst, &routing);
                r.check(rep.is_valid(), format!("{id} validates ({:?})", rep.violations));
            }
            Err(e) => r.check(false, format!("{id} transcribes onto the gadget: {e}")),
        }
        let res = solve(&inst, &cfg.policy(Mode::Decide))?;
        if let Some(sat) = r.status(res.status, &res.stats, id.as_str()) {
            r.check(sat, format!("{id} demands are routable"));
        }
    }
    Ok(())
}

/// The eight classes on the 1×3 LIC grid, plus the no-path as an exempt
/// class: it exists in some complement exactly when this is routable.
pub fn l7_instance(set: &GadgetSet) -> Result<(Instance, CutSet)> {
    let grid = build_grid_with(&GridSpec::uniform(GadgetKind::Lic, 1, 3), set)?;
    let mut no_path = ClassSpec::new("y1,y2", "X'", 1);
    no_path.exempt = true;
    let inst = standard_demand(
        &grid,
        &[
            ClassSpec::new("X", "X'", 2),
            ClassSpec::new("y1,y2", "y'1", 1),
            ClassSpec::new("y3", "y'2", 1),
            ClassSpec::new("y4", "y'3", 1),
            ClassSpec::new("y5", "y'4", 1),
            ClassSpec::new("y6", "y'5", 1),
            ClassSpec::new("X'", "y'6", 1),
            no_path,
        ],
    )?;
    let cuts = register_cuts(&inst, (1..grid.spec.rows).map(|j| grid.rows_upto(j)).collect())?;
    Ok((inst, cuts))
}

pub fn l8_instance(set: &GadgetSet) -> Result<(Instance, CutSet)> {
    let grid = build_grid_with(&GridSpec::uniform(GadgetKind::Xch, 1, 3), set)?;
    let inst = standard_demand(
        &grid,
        &[ClassSpec::new("Y", "Y'", 5), ClassSpec::new("x1", "x'1", 1), ClassSpec::new("x2", "x'2", 1)],
    )?;
    let cuts = register_cuts(&inst, (1..grid.spec.rows).map(|j| grid.rows_upto(j)).collect())?;
    Ok((inst, cuts))
}

fn grid_unsat(cfg: &HarnessConfig, r: &mut Run, inst: &Instance, cuts: &CutSet, what: &str) -> Result<()> {
    let res = solve_with_cuts(inst, &cfg.policy(Mode::Decide).engine(Engine::Sat), cuts)?;
    r.note(format!("{} conflicts, {} cuts registered", res.stats.nodes, cuts.len()));
    if let Some(sat) = r.status(res.status, &res.stats, what) {
        r.check(!sat, format!("{what} is unroutable"));
    }
    Ok(())
}

/// All formulas with one or two variables and one or two clauses; a
/// clause is a non-empty set of literals, a formula a multiset of clauses.
pub fn tiny_formulas(max_vars: u32) -> Vec<CnfFormula> {
    let mut out = Vec::new();
    for vars in 1..=max_vars {
        let lits: Vec<i32> = (1..=vars as i32).flat_map(|v| [v, -v]).collect();
        let clauses: Vec<Vec<i32>> = (1u32..1 << lits.len())
            .map(|m| lits.iter().enumerate().filter(|(k, _)| m >> k & 1 == 1).map(|(_, &l)| l).collect())
            .collect();
        for a in 0..clauses.len() {
            out.push(CnfFormula::new(vars, vec![clauses[a].clone()]).expect("valid clause"));
            for b in a..clauses.len() {
                out.push(CnfFormula::new(vars, vec![clauses[a].clone(), clauses[b].clone()]).expect("valid clauses"));
            }
        }
    }
    out
}

fn c1(cfg: &HarnessConfig, r: &mut Run) -> Result<()> {
    let formulas = tiny_formulas(match cfg.profile {
        Profile::Fast => 1,
        Profile::Full => 2,
    });
    let policy = cfg.policy(Mode::Decide).engine(Engine::Sat);
    let mut mismatches = Vec::new();
    let mut total = [0usize; 2];
    for f in &formulas {
        let expect = f.is_satisfiable();
        total[expect as usize] += 1;
        let c = directed::compile_full_with(f, &cfg.gadgets)?;
        let rep = directed::validate_directed(&c)?;
        if !rep.passed() {
            mismatches.push(format!("{:?}: structure {:?}", f.clauses, rep.problems));
            continue;
        }
        let g1 = directed::compile_g1_with(f, &cfg.gadgets)?;
        let p = f.num_vars as usize;
        let mut g1_sat = false;
        for mask in 0u64..1 << p {
            let lower: Vec<bool> = (0..p).map(|i| mask >> i & 1 == 1).collect();
            let res = solve(&directed::g1_instance(&g1, &lower)?, &policy)?;
            if r.status(res.status, &res.stats, "clause grid").unwrap_or(false) {
                g1_sat = true;
                break;
            }
        }
        let id = directed::identify_terminals(&c)?;
        let w = directed::corollary_transform(&c)?;
        let wraps_tight = directed::wrap_cut_check(&c, &w)?.iter().all(|t| t.tight == Some(true));
        let mut got = vec![g1_sat];
        for inst in [&c.instance, &id.instance, &w.instance] {
            let res = solve(inst, &policy)?;
            got.push(r.status(res.status, &res.stats, "grid").unwrap_or(!expect));
        }
        if got.iter().any(|&g| g != expect) || !wraps_tight || !id.acyclic_without_terminals {
            mismatches.push(format!("{:?}: expected {expect}, got {got:?}", f.clauses));
        }
    }
    // Drop the per-call status lines: the summary below is the output.
    r.output.clear();
    r.out(format!("{} formulas ({} satisfiable), {} mismatches", formulas.len(), total[1], mismatches.len()));
    r.note(format!("{} formulas, {} satisfiable", formulas.len(), total[1]));
    for m in mismatches.iter().take(5) {
        r.note(m.clone());
    }
    r.check(mismatches.is_empty(), "every tiny formula agrees with brute force");
    Ok(())
}

/// For IF, LL and TT: the arc-disjoint pairs between the single port and
/// the numbered ports on each axis, routable exactly when the numbers agree.
fn c2(cfg: &HarnessConfig, r: &mut Run) -> Result<()> {
    for kind in [GadgetKind::If, GadgetKind::Ll, GadgetKind::Tt] {
        let gd = cfg.gadget(kind)?;
        let g = &gd.graph;
        for i in 1..=2 {
            for j in 1..=2 {
                let mut classes = Vec::new();
                for (x, y) in [("a".to_string(), format!("a{i}")), ("b".to_string(), format!("b{j}"))] {
                    let (u, v) = (gd.port(&x)?, gd.port(&y)?);
                    // The stub with an outgoing arc is where the path starts.
                    let (s, t) = if g.out_degree(u) == 1 { (u, v) } else { (v, u) };
                    classes.push(DemandClass::new(vec![s], vec![t], 1));
                }
                let inst = Instance::new(g.clone(), classes)?;
                let res = solve(&inst, &cfg.policy(Mode::Decide))?;
                if let Some(sat) = r.status(res.status, &res.stats, &format!("{kind} a{i} b{j}")) {
                    r.check(sat == (i == j), format!("{kind}: a{i} with b{j} routable iff equal"));
                }
            }
        }
    }
    Ok(())
}

fn c3(cfg: &HarnessConfig, r: &mut Run) -> Result<()> {
    let gd = cfg.gadget(GadgetKind::Vv)?;
    let inst = Instance::new(
        gd.graph.clone(),
        vec![
            DemandClass::new(ports(gd, &["b2"])?, ports(gd, &["b"])?, 1),
            DemandClass::new(ports(gd, &["a1"])?, ports(gd, &["a"])?, 1),
        ],
    )?;
    let res = solve(&inst, &cfg.policy(Mode::Decide))?;
    if let Some(sat) = r.status(res.status, &res.stats, "VV b2->b with a1->a") {
        r.check(!sat, "VV has no arc-disjoint b2->b and a1->a");
    }
    // The other three pairs are what witness routings use.
    for (b, a) in [("b1", "a1"), ("b1", "a2"), ("b2", "a2")] {
        let inst = Instance::new(
            gd.graph.clone(),
            vec![
                DemandClass::new(ports(gd, &[b])?, ports(gd, &["b"])?, 1),
                DemandClass::new(ports(gd, &[a])?, ports(gd, &["a"])?, 1),
            ],
        )?;
        let res = solve(&inst, &cfg.policy(Mode::Decide))?;
        if let Some(sat) = r.status(res.status, &res.stats, &format!("VV {b}->b with {a}->a")) {
            r.check(sat, format!("VV routes {b}->b with {a}->a"));
        }
    }
    for (kind, want) in [(GadgetKind::Yes, true), (GadgetKind::No, false), (GadgetKind::On, false)] {
        let reach = reachable_in(cfg.gadget(kind)?, "c", "b'")?;
        r.out(format!("{kind} c->b': {reach}"));
        r.check(reach == want, format!("{kind} c->b' path exists: {want}"));
    }
    Ok(())
}

fn fig2(_cfg: &HarnessConfig, r: &mut Run) -> Result<()> {
    for crossing in [true, false] {
        let (g, routing) = two_path_configuration(crossing)?;
        let found = detect_crossings(&g, &routing)?;
        r.out(format!("crossing drawing {crossing}: {} crossings", found.len()));
        r.check(found.is_empty() != crossing, format!("drawing with crossing={crossing} detected as such"));
    }
    Ok(())
}

/// A random instance with one or two degree-4 non-crossing vertices and at
/// most twelve edges; terminals are never non-crossing.
pub fn expansion_instance(seed: u64) -> Result<Instance> {
    let mut rng = StdRng::seed_from_u64(seed);
    let hubs = rng.gen_range(1..=2usize);
    let others = rng.gen_range(4..=6usize);
    let mut b = GraphBuilder::new(false);
    let hub: Vec<usize> = (0..hubs).map(|k| b.add_vertex(&format!("h{k}"), None)).collect();
    let rest: Vec<usize> = (0..others).map(|k| b.add_vertex(&format!("v{k}"), None)).collect();
    let mut deg = vec![0usize; hubs];
    for k in 0..hubs {
        while deg[k] < 4 {
            // Another hub (if it still has room) or an ordinary vertex.
            let other_hub = (0..hubs).find(|&m| m != k && deg[m] < 4 && rng.gen_bool(0.2));
            match other_hub {
                Some(m) => {
                    b.add_edge(hub[k], hub[m]);
                    deg[m] += 1;
                }
                None => {
                    b.add_edge(hub[k], rest[rng.gen_range(0..others)]);
                }
            }
            deg[k] += 1;
        }
    }
    while b.edge_count() < 12 && rng.gen_bool(0.7) {
        let (x, y) = (rng.gen_range(0..others), rng.gen_range(0..others));
        if x != y {
            b.add_edge(rest[x], rest[y]);
        }
    }
    for &h in &hub {
        let mut rot = b.rotation(h).to_vec();
        rot.shuffle(&mut rng);
        b.set_rotation(h, rot);
        b.set_noncrossing(h, true);
    }
    let g = b.build()?;
    let ordinary: Vec<VertexId> = g.vertices().filter(|&v| !g.is_noncrossing(v)).collect();
    let mut demands = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let s = ordinary[rng.gen_range(0..ordinary.len())];
        let mut t = ordinary[rng.gen_range(0..ordinary.len())];
        while t == s {
            t = ordinary[rng.gen_range(0..ordinary.len())];
        }
        demands.push(DemandClass::new(vec![s], vec![t], rng.gen_range(1..=2)));
    }
    Instance::new(g, demands)
}

fn expansion(cfg: &HarnessConfig, r: &mut Run) -> Result<()> {
    let count = match cfg.profile {
        Profile::Fast => 25,
        Profile::Full => 100,
    };
    let mut disagree = Vec::new();
    let mut feasible = 0;
    for seed in 0..count {
        let inst = expansion_instance(seed)?;
        let native = solve(&inst, &cfg.policy(Mode::Decide))?;
        let expanded = solve(&expand_instance(&inst)?, &cfg.policy(Mode::Decide))?;
        let (a, b) = (
            r.status(native.status, &native.stats, "native"),
            r.status(expanded.status, &expanded.stats, "expanded"),
        );
        if let (Some(a), Some(b)) = (a, b) {
            feasible += a as usize;
            if a != b {
                disagree.push(seed);
            }
        }
    }
    r.output.clear();
    r.out(format!("{count} instances, {feasible} feasible, disagreements at seeds {disagree:?}"));
    r.note(format!("{count} instances, {feasible} feasible"));
    r.check(disagree.is_empty(), "expansion preserves feasibility");
    Ok(())
}

pub fn run_case(id: &str, cfg: &HarnessConfig) -> Result<CaseResult> {
    let f: fn(&HarnessConfig, &mut Run) -> Result<()> = match id {
        "L3_xch22" => l3,
        "L4_xch12" => xch12,
        "L5_lic22" => lic22,
        "L6_lic12" => lic12,
        "L7_shift" => |cfg, r| {
            let (inst, cuts) = l7_instance(&cfg.gadgets)?;
            grid_unsat(cfg, r, &inst, &cuts, "eight classes plus a no-path from y1,y2 to X'")
        },
        "L8_grid3" => |cfg, r| {
            let (inst, cuts) = l8_instance(&cfg.gadgets)?;
            grid_unsat(cfg, r, &inst, &cuts, "five Y->Y' with x1->x'1 and x2->x'2")
        },
        "C1_tiny" => c1,
        "C2_routers" => c2,
        "C3_vv" => c3,
        "FIG2_crossing" => fig2,
        "EXPANSION_EQUIV" => expansion,
        _ => return Err(Error::Input(format!("unknown case `{id}`; known: {}", CASE_IDS.join(", ")))),
    };
    let t0 = Instant::now();
    let mut run = Run::new();
    if cfg.budget == 0 {
        run.inconclusive = true;
        run.note("zero budget: nothing searched");
    } else if let Err(e) = f(cfg, &mut run) {
        // A gadget that fails to build or transcribe is a failed check.
        run.check(false, format!("case raised an error: {e}"));
    }
    let outcome = if !run.ok {
        Outcome::Fail
    } else if run.inconclusive {
        Outcome::Inconclusive
    } else {
        Outcome::Pass
    };
    Ok(CaseResult {
        id: id.to_string(),
        outcome,
        detail: run.notes.join("; "),
        output: run.output.join("\n"),
        nodes: run.nodes,
        elapsed_ms: t0.elapsed().as_secs_f64() * 1e3,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub profile: Profile,
    pub budget: u64,
    pub cases: Vec<CaseResult>,
    pub not_covered: String,
}

impl Summary {
    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(|c| c.outcome == Outcome::Pass)
    }

    /// 0 when every case passed, 1 on any failure, otherwise 3.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else if self.cases.iter().any(|c| c.outcome == Outcome::Fail) {
            1
        } else {
            3
        }
    }

    pub fn table(&self) -> String {
        let mut s = format!("{:<16} {:<13} {:>12} {:>10}  detail\n", "case", "outcome", "nodes", "ms");
        for c in &self.cases {
            s.push_str(&format!(
                "{:<16} {:<13} {:>12} {:>10.1}  {}\n",
                c.id,
                format!("{:?}", c.outcome).to_lowercase(),
                c.nodes,
                c.elapsed_ms,
                c.detail
            ));
        }
        s.push_str(&format!("note: {}\n", self.not_covered));
        s
    }
}

/// Runs every case in parallel; results keep the case order.
pub fn run_all(cfg: &HarnessConfig) -> Result<Summary> {
    run_selected(&CASE_IDS, cfg)
}

/// Runs the named cases in parallel; results keep the given order.
pub fn run_selected(ids: &[&str], cfg: &HarnessConfig) -> Result<Summary> {
    let cases = ids.par_iter().map(|id| run_case(id, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(Summary { profile: cfg.profile, budget: cfg.budget, cases, not_covered: NOT_COVERED.to_string() })
}


/// One altered edge in one gadget table.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub description: String,
    pub gadgets: GadgetSet,
}

/// Samples mutations whose tables still build: directed gadgets get one
/// arc reversed; undirected gadgets get one edge re-attached to the far
/// end of another (the two edges exchange endpoints, so degrees survive
/// the table checks).
pub fn sample_mutations(seed: u64, count: usize) -> Vec<Mutation> {
    use crate::gadgets::tables::table;
    let mut rng = StdRng::seed_from_u64(seed);
    let base: Vec<_> = GadgetKind::ALL.iter().map(|&k| table(k)).collect();
    let mut out: Vec<Mutation> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count {
        attempts += 1;
        let ti = rng.gen_range(0..base.len());
        let mut t = base[ti].clone();
        let k = rng.gen_range(0..t.edges.len());
        let description = if t.kind.is_directed() {
            let (a, b) = t.edges[k];
            t.edges[k] = (b, a);
            format!("{}: reverse arc {a:?}->{b:?}", t.kind)
        } else {
            let m = rng.gen_range(0..t.edges.len());
            let ((a, b), (c, d)) = (t.edges[k], t.edges[m]);
            if m == k || a == d || c == b || b == d {
                continue;
            }
            t.edges[k] = (a, d);
            t.edges[m] = (c, b);
            format!("{}: rewire {a:?}-{b:?} to {a:?}-{d:?} (and {c:?}-{d:?} to {c:?}-{b:?})", t.kind)
        };
        if !seen.insert(description.clone()) || crate::gadgets::build_from_table(&t).is_err() {
            continue;
        }
        let mut tables = base.clone();
        tables[ti] = t;
        out.push(Mutation { description, gadgets: GadgetSet::from_tables(tables) });
    }
    out
}

/// Runs cases cheapest first and stops at the first failure.
pub fn first_failure(cfg: &HarnessConfig) -> Result<Option<CaseResult>> {
    const ORDER: [&str; 11] = [
        "FIG2_crossing",
        "C3_vv",
        "C2_routers",
        "L4_xch12",
        "L6_lic12",
        "L5_lic22",
        "L3_xch22",
        "L7_shift",
        "L8_grid3",
        "EXPANSION_EQUIV",
        "C1_tiny",
    ];
    for id in ORDER {
        let r = run_case(id, cfg)?;
        if r.outcome == Outcome::Fail {
            return Ok(Some(r));
        }
    }
    Ok(None)
}
