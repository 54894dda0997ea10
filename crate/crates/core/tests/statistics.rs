//! Monte-Carlo checks against binomial bounds and chi-square tests.

use std::collections::BTreeMap;

use ragsim_core::algorithms::steiner_connect;
use ragsim_core::analysis::{
    admissibility_gamma, double_star_success_curve, gamma_fixed_point, robust_admissibility_check,
};
use ragsim_core::generators::{
    gen_er, gen_er_prior, gen_noisy_prior, gen_partitioned, group_of, subsample_prior,
    ErPriorParams, Family, NoisyPriorParams, PartitionParams,
};
use ragsim_core::oracles::RetrievalAnswer;
use ragsim_core::seed::derive;
use ragsim_core::{Graph, OracleSession, RetrievalMode, VertexId, WorldPair};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn within_sigmas(observed: f64, trials: f64, p: f64, sigmas: f64) -> bool {
    let mean = trials * p;
    let sd = (trials * p * (1.0 - p)).sqrt();
    (observed - mean).abs() <= sigmas * sd
}

fn chi_square_p_value(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    1.0 - ChiSquared::new((counts.len() - 1) as f64).unwrap().cdf(stat)
}

#[test]
fn er_edge_count_is_binomial() {
    let pairs = 1000.0 * 999.0 / 2.0;
    for seed in 0..100 {
        let g = gen_er(1000, 0.01, seed);
        assert!(within_sigmas(g.edge_count() as f64, pairs, 0.01, 4.0), "seed {seed}: {}", g.edge_count());
    }
}

#[test]
fn subsampling_complete_graph_keeps_half() {
    let complete = gen_er(100, 1.0, 0);
    assert_eq!(complete.edge_count(), 4950);
    for seed in 0..20 {
        let kept = subsample_prior(&complete, 0.5, seed).edge_count() as f64;
        assert!(within_sigmas(kept, 4950.0, 0.5, 4.0), "{kept}");
    }
}

#[test]
fn partitioned_keeps_eta_of_intra_group_edges() {
    let sizes = vec![100, 150, 250];
    let group = group_of(&sizes);
    for seed in 0..10 {
        let w = gen_partitioned(PartitionParams { group_sizes: sizes.clone(), p: 0.05, eta: 0.3, seed }).unwrap();
        let intra = w.truth().edges().filter(|e| group[e.lo().index()] == group[e.hi().index()]).count();
        assert!(within_sigmas(w.prior().edge_count() as f64, intra as f64, 0.3, 4.0));
    }
}

#[test]
fn noisy_prior_precision_is_r() {
    let (mut true_edges, mut prior_edges) = (0usize, 0usize);
    for seed in 0..20 {
        let w = gen_noisy_prior(NoisyPriorParams { n: 400, p: 0.05, eta: 0.5, r: 0.8, seed }).unwrap();
        prior_edges += w.prior().edge_count();
        true_edges += w.prior().edges().filter(|&e| w.truth().contains_edge(e)).count();
    }
    assert!(within_sigmas(true_edges as f64, prior_edges as f64, 0.8, 4.0), "{true_edges}/{prior_edges}");
}

#[test]
fn retrieval_is_uniform_over_eight_neighbors() {
    let truth = Graph::from_edges(9, (1..9).map(|i| (0, i))).unwrap();
    let w = WorldPair::new(truth, Graph::empty(9), Family::Custom).unwrap();
    let mut session = OracleSession::new(&w, 17);
    let mut counts = [0usize; 8];
    for _ in 0..100_000 {
        match session.retrieval_query(VertexId::new(0)).unwrap() {
            RetrievalAnswer::Neighbor(v) => counts[v.index() - 1] += 1,
            RetrievalAnswer::Bottom => panic!("center has neighbors"),
        }
    }
    assert!(chi_square_p_value(&counts) >= 0.001, "{counts:?}");
}

#[test]
fn memory_oracle_first_answer_is_uniform_over_unseen() {
    // Vertex 0 has truth neighbors 1..=9; edges to 1, 2, 3 are in the prior.
    let truth = Graph::from_edges(10, (1..10).map(|i| (0, i))).unwrap();
    let prior = Graph::from_edges(10, [(0, 1), (0, 2), (0, 3)]).unwrap();
    let w = WorldPair::new(truth, prior, Family::Custom).unwrap();
    let mut counts = [0usize; 6];
    for seed in 0..30_000 {
        let mut session = OracleSession::new(&w, seed).with_mode(RetrievalMode::PriorAwareMemory);
        match session.retrieve(VertexId::new(0)).unwrap() {
            RetrievalAnswer::Neighbor(v) => counts[v.index() - 4] += 1,
            RetrievalAnswer::Bottom => panic!("unseen neighbors remain"),
        }
    }
    assert!(chi_square_p_value(&counts) >= 0.001, "{counts:?}");
}

#[test]
fn steiner_stays_within_m_over_gamma() {
    let n = 1000;
    let p = 10.0 * (n as f64).ln() / n as f64;
    let terminals = 5;
    let (mut queries, mut bound) = (0.0, 0.0);
    let trials = 500;
    for trial in 0..trials {
        let seed = derive(99, trial);
        let w = gen_er_prior(ErPriorParams { n, p, eta: 0.5, seed }).unwrap();
        let gamma = admissibility_gamma(&w).unwrap().gamma_hat;
        let chosen: Vec<VertexId> = (0..terminals).map(|i| VertexId::new((seed as usize).wrapping_add(i * 197) % n)).collect();
        let mut sorted = chosen.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let mut session = OracleSession::new(&w, seed);
        let outcome = steiner_connect(&mut session, &sorted, 1000).unwrap();
        assert!(outcome.is_found());
        queries += outcome.queries.retrieval as f64;
        bound += terminals as f64 / gamma;
    }
    let (mean, limit) = (queries / trials as f64, 1.25 * bound / trials as f64);
    assert!(mean <= limit, "mean {mean} limit {limit}");
}

#[test]
fn robust_colors_keep_a_third_of_gamma() {
    let n = 2000;
    for k in [2usize, 4] {
        let p = k as f64 * (n as f64).ln() / n as f64;
        let threshold = gamma_fixed_point(n as f64 * p * 0.5 / k as f64) / 3.0;
        let mut good = 0;
        for seed in 0..20 {
            let w = gen_er_prior(ErPriorParams { n, p, eta: 0.5, seed }).unwrap();
            let report = robust_admissibility_check(&w, k, derive(seed, 4)).unwrap();
            if report.per_color.iter().all(|c| c.gamma_hat >= threshold) {
                good += 1;
            }
        }
        assert!(good >= 19, "K={k}: {good}/20 seeds");
    }
}

#[test]
fn success_curve_values() {
    assert!((double_star_success_curve(1000, 333).unwrap() - 333.0 / 499.0).abs() < 1e-15);
    let mut last = BTreeMap::new();
    for q in 0..=499 {
        last.insert(q, double_star_success_curve(1000, q).unwrap());
    }
    assert_eq!(last[&0], 0.0);
    assert_eq!(last[&499], 1.0);
}
