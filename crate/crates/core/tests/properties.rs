//! Property tests: structural invariants checked against brute-force
//! oracles written independently of the library.

use std::collections::HashSet;

use proptest::prelude::*;
use ragsim_core::algorithms::{
    audit_grounding, birag, budgeted_cci_search, double_bfs, generate_then_verify, is_sound,
    robust_k_routes, steiner_connect, Status,
};
use ragsim_core::analysis::{admissibility_of, fit_scaling};
use ragsim_core::generators::{
    contract_components, gen_er, gen_er_prior, gen_noisy_prior, subsample_prior, ErPriorParams,
    Family, NoisyPriorParams,
};
use ragsim_core::graph::{k_connected_by_enumeration, k_connected_by_min_cut};
use ragsim_core::oracles::RetrievalAnswer;
use ragsim_core::{Edge, Graph, OracleSession, RetrievalMode, VertexId, WorldPair};

fn v(i: usize) -> VertexId {
    VertexId::new(i)
}

/// Reachability matrix by Floyd-Warshall-style transitive closure.
fn closure(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for e in g.edges() {
        reach[e.lo().index()][e.hi().index()] = true;
        reach[e.hi().index()][e.lo().index()] = true;
    }
    for k in 0..n {
        let via = reach[k].clone();
        for row in reach.iter_mut() {
            if row[k] {
                for (cell, &r) in row.iter_mut().zip(&via) {
                    *cell |= r;
                }
            }
        }
    }
    reach
}

fn world(n: usize, p: f64, eta: f64, seed: u64) -> WorldPair {
    gen_er_prior(ErPriorParams { n, p, eta, seed }).expect("valid parameters")
}

fn endpoints(n: usize, a: usize, b: usize) -> (VertexId, VertexId) {
    let s = a % n;
    let t = (s + 1 + b % (n - 1)) % n;
    (v(s), v(t))
}

#[test]
fn components_match_transitive_closure_on_dense_er() {
    for seed in 0..5 {
        let g = gen_er(64, 0.5, seed);
        let reach = closure(&g);
        let labels = g.components();
        for (i, row) in reach.iter().enumerate() {
            for (j, &r) in row.iter().enumerate() {
                assert_eq!(labels.same(v(i), v(j)), r);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_invariants(n in 1usize..40, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = gen_er(n, p, seed);
        let mut degree_sum = 0;
        for u in 0..n {
            let nbrs: Vec<VertexId> = g.neighbors(v(u)).collect();
            prop_assert!(nbrs.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(!nbrs.contains(&v(u)));
            for &w in &nbrs {
                prop_assert!(g.has_edge(w, v(u)));
            }
            degree_sum += nbrs.len();
        }
        prop_assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn components_match_closure(n in 1usize..30, p in 0.0f64..0.3, seed in any::<u64>()) {
        let g = gen_er(n, p, seed);
        let reach = closure(&g);
        let labels = g.components();
        for (i, row) in reach.iter().enumerate() {
            for (j, &r) in row.iter().enumerate() {
                prop_assert_eq!(labels.same(v(i), v(j)), r);
            }
        }
        let total: usize = labels.sizes().values().sum();
        prop_assert_eq!(total, n);
    }

    #[test]
    fn bfs_paths_are_shortest_and_valid(n in 2usize..40, p in 0.0f64..0.3, seed in any::<u64>(), a in any::<usize>(), b in any::<usize>()) {
        let g = gen_er(n, p, seed);
        let (s, t) = endpoints(n, a, b);
        let labels = g.components();
        match g.bfs_path(s, t) {
            Some(path) => {
                prop_assert!(path.is_valid_in(&g));
                prop_assert_eq!(path.source(), Some(s));
                prop_assert_eq!(path.target(), Some(t));
                let meet = double_bfs(&g, s, t);
                let other = meet.path.expect("connected");
                prop_assert!(other.is_valid_in(&g));
                prop_assert_eq!(other.len(), path.len());
            }
            None => {
                prop_assert!(!labels.same(s, t));
                prop_assert!(double_bfs(&g, s, t).path.is_none());
            }
        }
    }

    #[test]
    fn prior_is_a_subgraph_of_truth(n in 2usize..60, p in 0.0f64..0.5, eta in 0.0f64..=1.0, seed in any::<u64>()) {
        let w = world(n, p, eta, seed);
        prop_assert!(w.prior().is_subgraph_of(w.truth()));
        prop_assert!(w.prior_reliable());
        let kept = subsample_prior(w.truth(), eta, seed);
        prop_assert!(kept.is_subgraph_of(w.truth()));
    }

    #[test]
    fn enumeration_and_min_cut_agree(p in 0.2f64..0.7, eta in 0.3f64..1.0, k in 1usize..4, seed in any::<u64>()) {
        let w = world(12, p, eta, seed);
        let edges: Vec<Edge> = w.truth().edges().collect();
        let (s, t) = (v(0), v(11));
        prop_assert_eq!(
            k_connected_by_enumeration(&edges, w.prior(), s, t, k),
            k_connected_by_min_cut(&edges, w.prior(), s, t, k)
        );
    }

    #[test]
    fn contraction_matches_cross_edge_scan(p in 0.05f64..0.4, eta in 0.0f64..1.0, seed in any::<u64>()) {
        let w = world(30, p, eta, seed);
        let meta = contract_components(&w);
        let labels = w.prior().components();
        let mut expected = HashSet::new();
        for e in w.truth().edges() {
            let (a, b) = (labels.label(e.lo()), labels.label(e.hi()));
            if a != b {
                expected.insert((meta.membership[a.index()].min(meta.membership[b.index()]), meta.membership[a.index()].max(meta.membership[b.index()])));
            }
        }
        let got: HashSet<(VertexId, VertexId)> = meta.meta.edges().map(|e| (e.lo(), e.hi())).collect();
        prop_assert_eq!(got, expected);
        for u in 0..30 {
            prop_assert_eq!(meta.membership[u], meta.membership[labels.label(v(u)).index()]);
        }
    }

    #[test]
    fn admissibility_matches_exhaustive_pairs(p in 0.05f64..0.5, eta in 0.0f64..1.0, seed in any::<u64>()) {
        let w = world(20, p, eta, seed);
        let labels = w.prior().components();
        let report = admissibility_of(w.truth(), &labels);
        let mut best: f64 = 0.0;
        for &component in labels.sizes().keys() {
            let mut gamma: f64 = 1.0;
            for u in 0..20 {
                let nbrs: Vec<VertexId> = w.truth().neighbors(v(u)).collect();
                if nbrs.is_empty() {
                    continue;
                }
                let inside = nbrs.iter().filter(|&&x| labels.label(x) == component).count();
                gamma = gamma.min(inside as f64 / nbrs.len() as f64);
            }
            prop_assert!((report.per_component_gammas[&component] - gamma).abs() < 1e-12);
            best = best.max(gamma);
        }
        prop_assert!((report.gamma_hat - best).abs() < 1e-12);
    }

    #[test]
    fn memory_oracle_never_repeats_or_leaks_prior(p in 0.1f64..0.6, eta in 0.0f64..1.0, seed in any::<u64>(), picks in prop::collection::vec(0usize..25, 1..400)) {
        let w = world(25, p, eta, seed);
        let mut session = OracleSession::new(&w, seed).with_mode(RetrievalMode::PriorAwareMemory);
        let mut seen = HashSet::new();
        for &u in &picks {
            if let RetrievalAnswer::Neighbor(x) = session.retrieve(v(u)).expect("in range") {
                let e = Edge::new(v(u), x);
                prop_assert!(w.truth().contains_edge(e));
                prop_assert!(!w.prior().contains_edge(e));
                prop_assert!(seen.insert(e));
            }
        }
        prop_assert_eq!(session.counts().retrieval, picks.len() as u64);
    }

    #[test]
    fn counters_match_shadow_log(p in 0.05f64..0.5, seed in any::<u64>(), ops in prop::collection::vec((0u8..4, 0usize..20, 0usize..20), 0..200)) {
        let w = world(20, p, 0.5, seed);
        let mut session = OracleSession::new(&w, seed).with_trace();
        let (mut retrieval, mut cci, mut verify) = (0u64, 0u64, 0u64);
        for &(op, a, b) in &ops {
            match op {
                0 => { session.retrieval_query(v(a)).unwrap(); retrieval += 1; }
                1 => { session.memory_retrieval_query(v(a)).unwrap(); retrieval += 1; }
                2 => { session.cci_query(v(a)).unwrap(); cci += 1; }
                _ if a != b => { session.verify_edge(v(a), v(b)).unwrap(); verify += 1; }
                _ => {}
            }
        }
        let counts = session.counts();
        prop_assert_eq!((counts.retrieval, counts.cci, counts.verify), (retrieval, cci, verify));
        prop_assert_eq!(session.trace().unwrap().len() as u64, retrieval + cci + verify);
    }

    #[test]
    fn algorithms_are_grounded_and_sound(n in 8usize..60, c in 0.5f64..4.0, eta in 0.0f64..1.0, seed in any::<u64>(), a in any::<usize>(), b in any::<usize>()) {
        let p = (c * (n as f64).ln() / n as f64).min(1.0);
        let w = world(n, p, eta, seed);
        let (s, t) = endpoints(n, a, b);
        let check = |outcome: &ragsim_core::algorithms::SearchOutcome, session: &OracleSession<'_>, terminals: &[VertexId]| {
            if outcome.is_found() {
                assert_eq!(audit_grounding(outcome, w.prior(), session.trace().unwrap()), Ok(()));
                assert!(is_sound(outcome, w.truth(), terminals));
            }
        };

        let mut session = OracleSession::new(&w, seed).with_trace();
        let outcome = birag(&mut session, s, t, 200).unwrap();
        check(&outcome, &session, &[s, t]);
        if outcome.status == Status::No {
            prop_assert!(w.truth().degree(s) == 0 || w.truth().degree(t) == 0);
        }

        let mut session = OracleSession::new(&w, seed).with_trace();
        let outcome = budgeted_cci_search(&mut session, s, t, 50).unwrap();
        check(&outcome, &session, &[s, t]);
        if outcome.status == Status::No {
            prop_assert!(!w.truth().components().same(s, t));
        }

        let terminals = [s, t, v((a / 7) % n)];
        let mut unique = terminals.to_vec();
        unique.sort_unstable();
        unique.dedup();
        let mut session = OracleSession::new(&w, seed).with_trace();
        let outcome = steiner_connect(&mut session, &unique, 200).unwrap();
        check(&outcome, &session, &unique);

        let mut session = OracleSession::new(&w, seed).with_trace();
        let outcome = robust_k_routes(&mut session, s, t, 2, seed, 200).unwrap();
        check(&outcome, &session, &[s, t]);
        if let Some(robust) = &outcome.robust {
            prop_assert!(k_connected_by_enumeration(&robust.edges, w.prior(), s, t, 2));
        }
    }

    #[test]
    fn verified_paths_are_grounded_and_sound(n in 10usize..80, r in 0.3f64..1.0, seed in any::<u64>(), a in any::<usize>(), b in any::<usize>()) {
        let p = (4.0 * (n as f64).ln() / n as f64).min(1.0);
        let w = gen_noisy_prior(NoisyPriorParams { n, p, eta: 0.6, r, seed }).unwrap();
        let (s, t) = endpoints(n, a, b);
        let mut session = OracleSession::new(&w, seed).with_trace();
        let outcome = generate_then_verify(&mut session, s, t, 3, 5000).unwrap();
        if outcome.is_found() {
            prop_assert_eq!(audit_grounding(&outcome, w.prior(), session.trace().unwrap()), Ok(()));
            prop_assert!(is_sound(&outcome, w.truth(), &[s, t]));
            prop_assert!(outcome.path().unwrap().len() <= 3);
        }
    }

    #[test]
    fn fit_recovers_exact_power_laws(slope in -2.0f64..2.0, scale in 0.1f64..100.0) {
        let points: Vec<(f64, f64)> = (0..6).map(|i| {
            let x = 10.0 * 2f64.powi(i);
            (x, scale * x.powf(slope))
        }).collect();
        let fit = fit_scaling(&points).unwrap();
        prop_assert!((fit.slope - slope).abs() < 1e-9);
        prop_assert!((fit.intercept - scale.ln()).abs() < 1e-8);
    }
}

#[test]
fn custom_worlds_reject_prior_outside_truth() {
    let truth = Graph::from_edges(3, [(0, 1)]).unwrap();
    let prior = Graph::from_edges(3, [(1, 2)]).unwrap();
    let w = WorldPair::new(truth, prior, Family::Custom).unwrap();
    assert!(!w.prior_reliable());
}
