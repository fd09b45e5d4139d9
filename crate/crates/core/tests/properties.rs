mod common;

use std::collections::BTreeSet;

use hardpaths::cnf::{parse_dimacs, CnfFormula};
use hardpaths::crossing::{detect_crossings, is_uncrossed, uncross};
use hardpaths::expand::expand_instance;
use hardpaths::io::{self, InstanceDocument, LayoutMeta, RoutingDocument};
use hardpaths::solver::{solve, Engine, Mode, SearchPolicy, Status};
use hardpaths::{validate_routing, Routing};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::*;

fn enumerate(inst: &hardpaths::Instance, pruning: bool, threads: usize) -> (Status, BTreeSet<Routing>) {
    let policy = SearchPolicy::new(Mode::Enumerate).budget(50_000_000).pruning(pruning).threads(threads);
    let res = solve(inst, &policy).unwrap();
    (res.status, res.witnesses.iter().map(Routing::canonical).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_naive_oracle(seed in any::<u64>()) {
        let inst = small_instance(seed);
        let expected = naive_routings(&inst);
        let (status, found) = enumerate(&inst, true, 1);
        prop_assert_eq!(status, if expected.is_empty() { Status::Unsat } else { Status::Sat });
        prop_assert_eq!(&found, &expected);
        for r in &found {
            prop_assert!(validate_routing(&inst, r).is_valid());
        }
    }

    #[test]
    fn threads_and_flow_bound_do_not_change_the_answer(seed in any::<u64>()) {
        let inst = small_instance(seed);
        let (s1, one) = enumerate(&inst, true, 1);
        let (s2, two) = enumerate(&inst, true, 3);
        prop_assert_eq!(s1, s2);
        prop_assert_eq!(&one, &two);
        let plain = SearchPolicy::new(Mode::Enumerate).flow_bound(false);
        let res = solve(&inst, &plain).unwrap();
        let set: BTreeSet<Routing> = res.witnesses.iter().map(Routing::canonical).collect();
        prop_assert_eq!(&set, &one);
    }

    #[test]
    fn sat_engine_agrees_with_backtracking(seed in any::<u64>()) {
        let inst = small_instance(seed);
        let bt = solve(&inst, &SearchPolicy::new(Mode::Witness)).unwrap();
        let sat = solve(&inst, &SearchPolicy::new(Mode::Witness).engine(Engine::Sat)).unwrap();
        prop_assert_eq!(bt.status, sat.status);
        for w in bt.witnesses.iter().chain(&sat.witnesses) {
            prop_assert!(validate_routing(&inst, w).is_valid());
        }
    }

    #[test]
    fn instance_documents_round_trip(seed in any::<u64>(), label in "[a-z]{0,6}") {
        let inst = small_instance(seed);
        let g = &inst.graph;
        let meta = LayoutMeta::new(&label)
            .parameter("seed", (seed % 1000) as usize)
            .terminal("first", g, hardpaths::VertexId(0))
            .with_cuts(vec![vec![hardpaths::VertexId(0), hardpaths::VertexId(1)]]);
        for layout in [None, Some(meta)] {
            let doc = InstanceDocument::new(&inst, layout);
            let text = io::to_json(&doc).unwrap();
            let back = io::parse_instance_document(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(back.instance().unwrap(), inst.clone());
            prop_assert_eq!(io::to_json(&back).unwrap(), text);
        }
    }

    #[test]
    fn routing_documents_round_trip(seed in any::<u64>()) {
        let g = square_grid(4, 4);
        let r = random_routing(&g, &mut StdRng::seed_from_u64(seed), 4);
        let doc = RoutingDocument::new(&r).with_walks(&g).unwrap();
        let back = io::parse_routing_document(&io::to_json(&doc).unwrap()).unwrap();
        prop_assert_eq!(back, doc);
    }

    #[test]
    fn dimacs_round_trip(vars in 1u32..6, clauses in prop::collection::vec(prop::collection::vec((1i32..6, any::<bool>()), 1..4), 1..6)) {
        let cl: Vec<Vec<i32>> = clauses
            .into_iter()
            .map(|c| c.into_iter().map(|(v, s)| { let v = (v - 1) % vars as i32 + 1; if s { v } else { -v } }).collect())
            .collect();
        let f = CnfFormula::new(vars, cl).unwrap();
        prop_assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f.clone());
        prop_assert_eq!(f.is_satisfiable(), !brute_force(&f).is_empty());
    }

    #[test]
    fn uncross_preserves_edges_endpoints_and_classes(seed in any::<u64>()) {
        let g = square_grid(5, 5);
        let r = random_routing(&g, &mut StdRng::seed_from_u64(seed), 5);
        let u = uncross(&g, &r).unwrap();
        prop_assert_eq!(u.used_edges(), r.used_edges());
        prop_assert_eq!(u.paths.len(), r.paths.len());
        for (a, b) in r.paths.iter().zip(&u.paths) {
            prop_assert_eq!(a.class, b.class);
            prop_assert_eq!(path_ends(&g, a), path_ends(&g, b));
        }
        prop_assert!(is_uncrossed(&g, &u).unwrap());
        let crossings = detect_crossings(&g, &u).unwrap();
        let pairs: BTreeSet<(usize, usize)> = crossings.iter().map(|c| (c.path_a, c.path_b)).collect();
        prop_assert_eq!(pairs.len(), crossings.len());
    }

    #[test]
    fn expansion_preserves_feasibility(seed in 0u64..10_000) {
        let inst = hardpaths::harness::expansion_instance(seed).unwrap();
        let policy = SearchPolicy::new(Mode::Decide);
        let a = solve(&inst, &policy).unwrap().status;
        let b = solve(&expand_instance(&inst).unwrap(), &policy).unwrap().status;
        prop_assert_eq!(a, b);
    }
}
