//! One line per acceptance criterion, with its limits pinned below. Exits
//! non-zero when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use hardpaths::crossing::{detect_crossings, is_uncrossed, uncross};
use hardpaths::gadgets::{reachable_in, standard, GadgetKind};
use hardpaths::harness::{self, first_failure, run_case, sample_mutations, HarnessConfig, Outcome, Profile};
use hardpaths::reduction::undirected::{self, CompileOptions};
use hardpaths::solver::{solve, Mode, SearchPolicy, Status};
use hardpaths::{validate_routing, Routing};
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::*;

/// Per-case limits for the gadget suite.
const GADGET_CASE_LIMIT: Duration = Duration::from_secs(5 * 60);
const GRID_CASE_LIMIT: Duration = Duration::from_secs(30 * 60);
/// Budget for the shifted-LIC grid case.
const L7_BUDGET: u64 = 100_000_000;
const DIRECTED_CLAIMS_LIMIT: Duration = Duration::from_secs(10);
const STRUCTURE_LIMIT: Duration = Duration::from_secs(30);
const WITNESS_FORMULAS: usize = 10;
const WITNESS_LIMIT: Duration = Duration::from_secs(120);
const TINY_BUDGET: u64 = 100_000_000;
const TINY_PER_FORMULA_LIMIT: Duration = Duration::from_secs(10 * 60);
const EXPANSION_INSTANCES: usize = 100;
const UNCROSS_ROUTINGS: usize = 1000;
const ORACLE_INSTANCES: u64 = 100;
const MUTATIONS: usize = 30;
const MIN_MUTATIONS: usize = 20;

struct Line {
    ok: bool,
    text: String,
}

fn line(ok: bool, text: impl Into<String>) -> Line {
    Line { ok, text: text.into() }
}

fn full() -> HarnessConfig {
    HarnessConfig { profile: Profile::Full, ..Default::default() }
}

fn case(id: &str, cfg: &HarnessConfig) -> (bool, Duration, String) {
    let t0 = Instant::now();
    match run_case(id, cfg) {
        Ok(r) => (r.outcome == Outcome::Pass, t0.elapsed(), format!("{id} {:?} {}", r.outcome, r.detail)),
        Err(e) => (false, t0.elapsed(), format!("{id} error: {e}")),
    }
}

fn gadget_suite() -> Line {
    let cfg = full();
    let mut ok = true;
    let mut parts = Vec::new();
    for (id, limit) in [
        ("L3_xch22", GADGET_CASE_LIMIT),
        ("L4_xch12", GADGET_CASE_LIMIT),
        ("L5_lic22", GADGET_CASE_LIMIT),
        ("L6_lic12", GADGET_CASE_LIMIT),
        ("L8_grid3", GRID_CASE_LIMIT),
    ] {
        let (pass, t, detail) = case(id, &cfg);
        ok &= pass && t <= limit;
        if !pass {
            parts.push(detail);
        } else {
            parts.push(format!("{id} {:.2}s", t.as_secs_f64()));
        }
    }
    line(ok, format!("gadget lemma suite: {}", parts.join(", ")))
}

fn shifted_lic_grid() -> Line {
    let cfg = HarnessConfig { budget: L7_BUDGET, ..full() };
    let (pass, t, detail) = case("L7_shift", &cfg);
    line(pass, format!("1x3 LIC grid with the no-path class: {detail} in {:.2}s (budget {L7_BUDGET})", t.as_secs_f64()))
}

fn directed_claims() -> Line {
    let cfg = full();
    let t0 = Instant::now();
    let (c2, _, d2) = case("C2_routers", &cfg);
    let (c3, _, d3) = case("C3_vv", &cfg);
    let port = |k: GadgetKind| reachable_in(standard(k), "c", "b'").unwrap();
    let ports = port(GadgetKind::Yes) && !port(GadgetKind::No) && !port(GadgetKind::On);
    let t = t0.elapsed();
    let ok = c2 && c3 && ports && t <= DIRECTED_CLAIMS_LIMIT;
    line(
        ok,
        format!(
            "directed gadget claims: {d2}; {d3}; c->b' only in YES: {ports}; {:.3}s (limit {}s)",
            t.as_secs_f64(),
            DIRECTED_CLAIMS_LIMIT.as_secs()
        ),
    )
}

fn undirected_structure() -> Line {
    let t0 = Instant::now();
    let f = hardpaths::cnf::CnfFormula::new(3, vec![vec![1, 2, 3], vec![-1, 2, -3], vec![1, -2, 3]]).unwrap();
    let run = || -> hardpaths::Result<(bool, String)> {
        let c = undirected::compile(&f, CompileOptions::default())?;
        let s = undirected::stats(&c);
        let rep = undirected::validate_structure(&c, &f)?;
        let tight = rep.terminal_cuts.iter().all(|(_, t)| t.tight == Some(true));
        let ok = s.q == 74
            && s.p == 450
            && s.demands == vec![6, 897]
            && s.lic_cells == 9
            && rep.odd_set_matches
            && tight
            && rep.passed();
        Ok((
            ok,
            format!(
                "q={} p={} demands={:?} LIC={} odd set matches={} terminal cuts tight={}",
                s.q, s.p, s.demands, s.lic_cells, rep.odd_set_matches, tight
            ),
        ))
    };
    let (ok, text) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
    let t = t0.elapsed();
    line(ok && t <= STRUCTURE_LIMIT, format!("undirected structure n=3 p'=3: {text}; {:.2}s", t.as_secs_f64()))
}

fn witness_soundness() -> Line {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut done = 0;
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut shapes = BTreeSet::new();
    while done < WITNESS_FORMULAS {
        let vars = [3u32, 4][done % 2];
        let clauses = [3usize, 4][done / 2 % 2];
        let f = random_3cnf(&mut rng, vars, clauses);
        let sols = brute_force(&f);
        let Some(a) = sols.first() else { continue };
        let t0 = Instant::now();
        let verdict = undirected::compile(&f, CompileOptions::default()).and_then(|c| {
            let r = undirected::witness(&c, &f, a)?;
            Ok(validate_routing(&c.instance, &r).violations.len())
        });
        let t = t0.elapsed();
        slowest = slowest.max(t);
        match verdict {
            Ok(0) if t <= WITNESS_LIMIT => {}
            Ok(n) => failures.push(format!("{:?}: {n} violations in {:.1}s", f.clauses, t.as_secs_f64())),
            Err(e) => failures.push(format!("{:?}: {e}", f.clauses)),
        }
        shapes.insert((vars, clauses));
        done += 1;
    }
    line(
        failures.is_empty(),
        format!(
            "witness soundness: {done} satisfiable 3-CNF formulas, shapes (p',n) {:?}, slowest {:.2}s{}",
            shapes,
            slowest.as_secs_f64(),
            if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join("; ")) }
        ),
    )
}

fn tiny_directed() -> Line {
    let cfg = HarnessConfig { budget: TINY_BUDGET, ..full() };
    let count = harness::tiny_formulas(2).len();
    let (pass, t, detail) = case("C1_tiny", &cfg);
    let per = t / count.max(1) as u32;
    line(
        pass && per <= TINY_PER_FORMULA_LIMIT,
        format!("tiny directed family: {detail}; {:.2}s total, {:.1}ms per formula", t.as_secs_f64(), per.as_secs_f64() * 1e3),
    )
}

fn expansion() -> Line {
    let (pass, _, detail) = case("EXPANSION_EQUIV", &full());
    let counted = detail.contains(&format!("{EXPANSION_INSTANCES} instances"));
    line(pass && counted, format!("expansion equivalence: {detail}"))
}

fn uncrossing() -> Line {
    let g = square_grid(5, 5);
    let mut rng = StdRng::seed_from_u64(99);
    let mut problems = Vec::new();
    let (mut crossed, mut multi) = (0, 0);
    for k in 0..UNCROSS_ROUTINGS {
        let r = random_routing(&g, &mut rng, 5);
        let before = detect_crossings(&g, &r).unwrap();
        if !before.is_empty() {
            crossed += 1;
        }
        let pairs: BTreeSet<(usize, usize)> = before.iter().map(|c| (c.path_a, c.path_b)).collect();
        if pairs.len() < before.len() {
            multi += 1;
        }
        let u = match uncross(&g, &r) {
            Ok(u) => u,
            Err(e) => {
                problems.push(format!("routing {k}: {e}"));
                continue;
            }
        };
        let same_paths = u.paths.len() == r.paths.len()
            && r.paths.iter().zip(&u.paths).all(|(a, b)| a.class == b.class && path_ends(&g, a) == path_ends(&g, b));
        if u.used_edges() != r.used_edges() || !same_paths {
            problems.push(format!("routing {k}: edges, endpoints or classes changed"));
        }
        let after = detect_crossings(&g, &u).unwrap();
        let mut per_pair = std::collections::BTreeMap::new();
        for c in &after {
            *per_pair.entry((c.path_a, c.path_b)).or_insert(0) += 1;
        }
        let same_ends = |a: usize, b: usize| {
            let (x, y) = (path_ends(&g, &u.paths[a]), path_ends(&g, &u.paths[b]));
            x == y || x == (y.1, y.0)
        };
        if per_pair.iter().any(|(&(a, b), &n)| n > 1 || same_ends(a, b)) || !is_uncrossed(&g, &u).unwrap() {
            problems.push(format!("routing {k}: still crossed"));
        }
    }
    let fig = |crossing| {
        let (g, r) = hardpaths::gadgets::figures::two_path_configuration(crossing).unwrap();
        detect_crossings(&g, &r).unwrap().len()
    };
    let fig_ok = fig(true) == 1 && fig(false) == 0;
    let (fig2, _, _) = case("FIG2_crossing", &full());
    line(
        problems.is_empty() && fig_ok && fig2,
        format!(
            "uncrossing: {UNCROSS_ROUTINGS} routings ({crossed} crossed, {multi} with a repeated pair), {} problems; two-path verdicts crossing={} turning={}{}",
            problems.len(),
            fig(true),
            fig(false),
            problems.first().map(|p| format!("; first: {p}")).unwrap_or_default()
        ),
    )
}

fn solver_oracle() -> Line {
    let mut mismatch = Vec::new();
    let (mut sat, mut multi, mut edges) = (0, 0, 0);
    for seed in 0..ORACLE_INSTANCES {
        let inst = small_instance(seed);
        edges = edges.max(inst.graph.edge_count());
        let expected = naive_routings(&inst);
        let res = solve(&inst, &SearchPolicy::new(Mode::Enumerate)).unwrap();
        let found: BTreeSet<Routing> = res.witnesses.iter().map(Routing::canonical).collect();
        let status_ok = res.status == if expected.is_empty() { Status::Unsat } else { Status::Sat };
        if found != expected || res.stats.solutions as usize != expected.len() || !status_ok {
            mismatch.push(seed);
        }
        sat += !expected.is_empty() as usize;
        multi += (expected.len() > 1) as usize;
    }
    let on = harness::run_all(&full()).unwrap();
    let off = harness::run_all(&HarnessConfig { pruning: false, ..full() }).unwrap();
    let differing: Vec<&str> = on
        .cases
        .iter()
        .zip(&off.cases)
        .filter(|(a, b)| a.outcome != b.outcome || a.output != b.output)
        .map(|(a, _)| a.id.as_str())
        .collect();
    line(
        mismatch.is_empty() && differing.is_empty() && on.all_passed(),
        format!(
            "solver oracle: {ORACLE_INSTANCES} instances (<= {edges} edges, {sat} routable, {multi} with several routings), mismatches {:?}; pruning on/off differ on {:?}",
            mismatch, differing
        ),
    )
}

fn mutations() -> Line {
    let sample = sample_mutations(7, MUTATIONS);
    let mut survivors = Vec::new();
    let mut by_case: std::collections::BTreeMap<String, usize> = Default::default();
    for m in &sample {
        let cfg = HarnessConfig { gadgets: m.gadgets.clone(), ..full() };
        match first_failure(&cfg) {
            Ok(Some(c)) => *by_case.entry(c.id).or_default() += 1,
            Ok(None) => survivors.push(m.description.clone()),
            Err(e) => *by_case.entry(format!("error {e}")).or_default() += 1,
        }
    }
    line(
        sample.len() >= MIN_MUTATIONS && survivors.is_empty(),
        format!("mutation sensitivity: {} mutations, detected by {:?}, survivors {:?}", sample.len(), by_case, survivors),
    )
}

fn main() {
    let checks: [(&str, fn() -> Line); 10] = [
        ("1", gadget_suite),
        ("2", shifted_lic_grid),
        ("3", directed_claims),
        ("4", undirected_structure),
        ("5", witness_soundness),
        ("6", tiny_directed),
        ("7", expansion),
        ("8", uncrossing),
        ("9", solver_oracle),
        ("10", mutations),
    ];
    let mut failed = 0;
    for (n, f) in checks {
        let t0 = Instant::now();
        let l = f();
        failed += !l.ok as usize;
        println!(
            "criterion {n:>2} {} {} [{:.1}s]",
            if l.ok { "PASS" } else { "FAIL" },
            l.text,
            t0.elapsed().as_secs_f64()
        );
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
