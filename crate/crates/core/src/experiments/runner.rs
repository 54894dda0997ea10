use std::fs;
use std::io::BufWriter;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::record::{summarize, write_records};
use super::{ExperimentConfig, ExperimentError, ExperimentKind, SweepResult, TrialRecord};
use crate::algorithms::{
    audit_grounding, birag, budgeted_cci_search, double_bfs, generate_then_verify,
    grounded_bidirectional_probe, is_sound, prior_component_scan, robust_k_routes,
    steiner_connect, SearchOutcome, Status,
};
use crate::analysis::{admissibility_gamma, k_birthday_counts, robust_admissibility_check};
use crate::generators::{
    gen_complete_empty, gen_double_star, gen_er_prior, gen_noisy_prior, DoubleStarParams,
    ErPriorParams, NoisyPriorParams, WorldPair,
};
use crate::graph::{internally_k_connected, Graph, VertexId};
use crate::oracles::{OracleSession, QueryCounts, RetrievalMode};
use crate::seed::{derive, stream, trial_seed};

/// Environment variable holding the number of worker threads.
pub const WORKERS_ENV: &str = "RAGSIM_WORKERS";

/// Per-trial diagnostics computed with full knowledge of the world. They
/// are kept out of the CSV.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialDetail {
    /// Admissibility of the world (minimum over colors for robust-k).
    pub gamma_hat: Option<f64>,
    /// verify: some fully true prior path of length at most `c` joins the
    /// endpoints.
    pub qualifying: Option<bool>,
    /// FOUND outputs replayed against the session trace.
    pub grounded: Option<bool>,
    /// FOUND outputs checked edge by edge against the truth.
    pub sound: Option<bool>,
    /// robust-k FOUND outputs checked for internal K-connectivity.
    pub k_connected: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub records: Vec<TrialRecord>,
    pub details: Vec<TrialDetail>,
    pub sweep: SweepResult,
}

/// Effective parameters for one grid point after applying defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolved {
    pub p: f64,
    pub eta: f64,
    pub r: f64,
    pub path_length: usize,
    pub max_candidates: usize,
    pub k: usize,
    pub terminals: usize,
    pub m: usize,
    pub oracle: RetrievalMode,
    pub budget: Option<usize>,
}

pub fn resolve(config: &ExperimentConfig, n: usize) -> Resolved {
    let params = &config.params;
    let ln = (n as f64).ln();
    let kind = config.experiment;
    let k = params.k.unwrap_or(match kind {
        ExperimentKind::KBirthday => 10,
        _ => 2,
    });
    let coefficient = params.p_coefficient.unwrap_or(match kind {
        ExperimentKind::BiragAdmissible | ExperimentKind::Steiner => 10.0,
        ExperimentKind::CciBudget => 1.5,
        ExperimentKind::RobustK => 1.0,
        ExperimentKind::Verify => 5.0,
        ExperimentKind::DoubleBfs => 0.01,
        _ => 0.0,
    });
    let p = match kind {
        ExperimentKind::DoubleBfs => coefficient * ln.powi(4) / n as f64,
        ExperimentKind::RobustK => k as f64 * coefficient * ln / n as f64,
        _ => coefficient * ln / n as f64,
    }
    .min(1.0);
    let eta = params.eta.unwrap_or(match kind {
        ExperimentKind::CciBudget => 0.5 / (n as f64 * p),
        ExperimentKind::RobustK => 0.25,
        ExperimentKind::DoubleBfs => 0.0,
        _ => 0.5,
    });
    let m_coefficient = params.m_coefficient.unwrap_or(0.3);
    Resolved {
        p,
        eta: eta.min(1.0),
        r: params.r.unwrap_or(0.8),
        path_length: params.path_length.unwrap_or(3),
        max_candidates: params.max_candidates.unwrap_or(10_000),
        k,
        terminals: params.terminals.unwrap_or(5),
        m: ((m_coefficient * ((k * n) as f64).sqrt()).floor() as usize).max(1),
        oracle: params.oracle.unwrap_or(match kind {
            ExperimentKind::DoubleStar | ExperimentKind::Birthday => RetrievalMode::PriorAwareMemory,
            _ => RetrievalMode::Plain,
        }),
        budget: params.budget,
    }
}

/// CCI call budget `max(1, floor(1 / (p ln(n)^2 sqrt(n))))`.
pub fn cci_budget(n: usize, p: f64) -> usize {
    let ln = (n as f64).ln();
    let raw = 1.0 / (p * ln * ln * (n as f64).sqrt());
    (raw.floor() as usize).max(1)
}

/// Iteration cap for retrieval loops: `50 * ceil(1 / gamma)`, or `10 n`
/// when `gamma` is zero.
pub fn iteration_cap(gamma: f64, n: usize) -> usize {
    if gamma > 0.0 {
        (50.0 * (1.0 / gamma).ceil()) as usize
    } else {
        10 * n
    }
}

/// Two distinct uniform vertices of `[lo, hi)` and `[lo2, hi2)`.
fn pick_pair(rng: &mut ChaCha8Rng, a: std::ops::Range<usize>, b: std::ops::Range<usize>) -> (VertexId, VertexId) {
    loop {
        let s = rng.random_range(a.clone());
        let t = rng.random_range(b.clone());
        if s != t {
            return (VertexId::new(s), VertexId::new(t));
        }
    }
}

fn distinct_vertices(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<VertexId> {
    rand::seq::index::sample(rng, n, count)
        .into_iter()
        .map(VertexId::new)
        .collect()
}

struct TrialResult {
    status: Status,
    counts: QueryCounts,
    visited: Option<usize>,
    detail: TrialDetail,
}

impl TrialResult {
    fn from_outcome(outcome: &SearchOutcome, session: &OracleSession<'_>, world: &WorldPair, terminals: &[VertexId]) -> Self {
        let found = outcome.is_found();
        TrialResult {
            status: outcome.status,
            counts: outcome.queries,
            visited: None,
            detail: TrialDetail {
                grounded: found.then(|| {
                    audit_grounding(outcome, world.prior(), session.trace().unwrap_or(&[])).is_ok()
                }),
                sound: found.then(|| is_sound(outcome, world.truth(), terminals)),
                ..TrialDetail::default()
            },
        }
    }
}

fn er_world(n: usize, r: &Resolved, seed: u64) -> Result<WorldPair, ExperimentError> {
    Ok(gen_er_prior(ErPriorParams {
        n,
        p: r.p,
        eta: r.eta,
        seed,
    })?)
}

fn run_trial(kind: ExperimentKind, n: usize, r: &Resolved, seed: u64) -> Result<TrialResult, ExperimentError> {
    let world_seed = derive(seed, stream::WORLD);
    let session_seed = derive(seed, stream::SESSION);
    let mut endpoints = ChaCha8Rng::seed_from_u64(derive(seed, stream::ENDPOINTS));
    let coloring_seed = derive(seed, stream::COLORING);

    let result = match kind {
        ExperimentKind::BiragAdmissible => {
            let world = er_world(n, r, world_seed)?;
            let gamma = admissibility_gamma(&world)?.gamma_hat;
            let (s, t) = pick_pair(&mut endpoints, 0..n, 0..n);
            let mut session = OracleSession::new(&world, session_seed).with_mode(r.oracle).with_trace();
            let cap = r.budget.unwrap_or_else(|| iteration_cap(gamma, n));
            let outcome = birag(&mut session, s, t, cap)?;
            let mut result = TrialResult::from_outcome(&outcome, &session, &world, &[s, t]);
            result.detail.gamma_hat = Some(gamma);
            result
        }
        ExperimentKind::Steiner => {
            let world = er_world(n, r, world_seed)?;
            let gamma = admissibility_gamma(&world)?.gamma_hat;
            let terminals = distinct_vertices(&mut endpoints, n, r.terminals);
            let mut session = OracleSession::new(&world, session_seed).with_mode(r.oracle).with_trace();
            let cap = r.budget.unwrap_or_else(|| iteration_cap(gamma, n));
            let outcome = steiner_connect(&mut session, &terminals, cap)?;
            let mut result = TrialResult::from_outcome(&outcome, &session, &world, &terminals);
            result.detail.gamma_hat = Some(gamma);
            result
        }
        ExperimentKind::DoubleStar => {
            let world = gen_double_star(DoubleStarParams { n, seed: world_seed })?;
            let half = n / 2;
            let (s, t) = pick_pair(&mut endpoints, 0..half, half..n);
            let mut session = OracleSession::new(&world, session_seed).with_mode(r.oracle).with_trace();
            let outcome = prior_component_scan(&mut session, s, t, r.budget.unwrap_or(10 * n))?;
            TrialResult::from_outcome(&outcome, &session, &world, &[s, t])
        }
        ExperimentKind::Birthday => {
            let world = gen_complete_empty(n)?;
            let (s, t) = pick_pair(&mut endpoints, 0..n, 0..n);
            let mut session = OracleSession::new(&world, session_seed).with_trace();
            let outcome = grounded_bidirectional_probe(&mut session, s, t, r.budget.unwrap_or(10 * n))?;
            TrialResult::from_outcome(&outcome, &session, &world, &[s, t])
        }
        ExperimentKind::CciBudget => {
            let world = er_world(n, r, world_seed)?;
            let (s, t) = pick_pair(&mut endpoints, 0..n, 0..n);
            let mut session = OracleSession::new(&world, session_seed).with_trace();
            let budget = r.budget.unwrap_or_else(|| cci_budget(n, r.p));
            let outcome = budgeted_cci_search(&mut session, s, t, budget)?;
            TrialResult::from_outcome(&outcome, &session, &world, &[s, t])
        }
        ExperimentKind::RobustK => {
            let world = er_world(n, r, world_seed)?;
            let gamma = robust_admissibility_check(&world, r.k, coloring_seed)?.gamma;
            let (s, t) = pick_pair(&mut endpoints, 0..n, 0..n);
            let mut session = OracleSession::new(&world, session_seed).with_mode(r.oracle).with_trace();
            let cap = r.budget.unwrap_or_else(|| {
                let coupons = (1.0 + (r.k as f64).ln()).ceil() as usize;
                (iteration_cap(gamma, n) * coupons).min(10 * n)
            });
            let outcome = robust_k_routes(&mut session, s, t, r.k, coloring_seed, cap)?;
            let mut result = TrialResult::from_outcome(&outcome, &session, &world, &[s, t]);
            result.detail.gamma_hat = Some(gamma);
            result.detail.k_connected = outcome
                .robust
                .as_ref()
                .map(|robust| internally_k_connected(&robust.edges, world.prior(), s, t, r.k));
            result
        }
        ExperimentKind::Verify => {
            let world = gen_noisy_prior(NoisyPriorParams {
                n,
                p: r.p,
                eta: r.eta,
                r: r.r,
                seed: world_seed,
            })?;
            let (s, t) = pick_pair(&mut endpoints, 0..n, 0..n);
            let mut session = OracleSession::new(&world, session_seed).with_trace();
            let outcome = generate_then_verify(&mut session, s, t, r.path_length, r.max_candidates)?;
            let mut result = TrialResult::from_outcome(&outcome, &session, &world, &[s, t]);
            result.detail.qualifying = Some(has_true_prior_path(&world, s, t, r.path_length));
            result
        }
        ExperimentKind::DoubleBfs => {
            let world = er_world(n, r, world_seed)?;
            let (s, t) = pick_pair(&mut endpoints, 0..n, 0..n);
            let out = double_bfs(world.truth(), s, t);
            TrialResult {
                status: if out.path.is_some() { Status::Found } else { Status::No },
                counts: QueryCounts::default(),
                visited: Some(out.visited),
                detail: TrialDetail {
                    sound: out.path.as_ref().map(|p| {
                        p.is_valid_in(world.truth()) && p.source() == Some(s) && p.target() == Some(t)
                    }),
                    ..TrialDetail::default()
                },
            }
        }
        ExperimentKind::KBirthday => {
            let c = k_birthday_counts(r.m, n, 1, seed)?[0];
            TrialResult {
                status: if c >= r.k { Status::Found } else { Status::No },
                counts: QueryCounts::default(),
                visited: Some(c),
                detail: TrialDetail::default(),
            }
        }
    };
    Ok(result)
}

/// Whether the prior edges that are also truth edges join `s` and `t`
/// within `c` steps.
fn has_true_prior_path(world: &WorldPair, s: VertexId, t: VertexId, c: usize) -> bool {
    let trusted = world.prior().filter_edges(|e| world.truth().contains_edge(e));
    bfs_distance(&trusted, s, t).is_some_and(|d| d <= c)
}

fn bfs_distance(g: &Graph, s: VertexId, t: VertexId) -> Option<usize> {
    g.bfs_path(s, t).map(|p| p.len())
}

fn worker_pool() -> Result<Option<rayon::ThreadPool>, ExperimentError> {
    let Ok(value) = std::env::var(WORKERS_ENV) else {
        return Ok(None);
    };
    let workers: usize = value.trim().parse().map_err(|_| ExperimentError::Config {
        field: "RAGSIM_WORKERS",
        message: format!("{value:?} is not a positive integer"),
    })?;
    if workers == 0 {
        return Err(ExperimentError::Config {
            field: "RAGSIM_WORKERS",
            message: "must be positive".into(),
        });
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map(Some)
        .map_err(|e| ExperimentError::Config {
            field: "RAGSIM_WORKERS",
            message: e.to_string(),
        })
}

/// Runs the grid in parallel and merges results in `(n, trial)` order.
/// With an output path set, also writes the CSV and the sweep JSON.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutput, ExperimentError> {
    config.validate()?;
    let kind = config.experiment;
    let jobs: Vec<(usize, usize)> = config
        .n_grid
        .iter()
        .flat_map(|&n| (0..config.trials).map(move |trial| (n, trial)))
        .collect();
    let run = || -> Result<Vec<(TrialRecord, TrialDetail)>, ExperimentError> {
        jobs.par_iter()
            .map(|&(n, trial)| {
                let resolved = resolve(config, n);
                let seed = trial_seed(config.seed, kind.name(), n, trial);
                let start = Instant::now();
                let result = run_trial(kind, n, &resolved, seed)?;
                let wall_ms = if config.timing {
                    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
                } else {
                    0.0
                };
                let record = TrialRecord {
                    experiment: kind,
                    n,
                    trial,
                    seed,
                    status: result.status,
                    retrieval_q: result.counts.retrieval,
                    cci_q: result.counts.cci,
                    verify_q: result.counts.verify,
                    visited: result.visited,
                    wall_ms,
                };
                Ok((record, result.detail))
            })
            .collect()
    };
    let rows = match worker_pool()? {
        Some(pool) => pool.install(run)?,
        None => run()?,
    };
    let (records, details): (Vec<TrialRecord>, Vec<TrialDetail>) = rows.into_iter().unzip();
    let sweep = summarize(config, &records);
    if let Some(path) = &config.output {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        write_records(&records, BufWriter::new(fs::File::create(path)?))?;
        let json = serde_json::to_string_pretty(&sweep)?;
        fs::write(path.with_extension("json"), json + "\n")?;
    }
    Ok(RunOutput {
        records,
        details,
        sweep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cci_budget_formula() {
        // 1 / (p ln^2 n sqrt n) is below 1 in the default regime.
        let n = 1 << 14;
        let p = 1.5 * (n as f64).ln() / n as f64;
        assert_eq!(cci_budget(n, p), 1);
        assert_eq!(cci_budget(100, 1e-6), (1.0 / (1e-6 * 100f64.ln().powi(2) * 10.0)) as usize);
    }

    #[test]
    fn iteration_caps() {
        assert_eq!(iteration_cap(1.0, 10), 50);
        assert_eq!(iteration_cap(0.3, 10), 200);
        assert_eq!(iteration_cap(0.0, 10), 100);
    }

    #[test]
    fn defaults() {
        let config = ExperimentConfig::new(ExperimentKind::RobustK, vec![2000], 1, 0);
        let r = resolve(&config, 2000);
        assert!((r.p - 2.0 * 2000f64.ln() / 2000.0).abs() < 1e-15);
        assert_eq!(r.eta, 0.25);
        let config = ExperimentConfig::new(ExperimentKind::KBirthday, vec![10_000], 1, 0);
        assert_eq!(resolve(&config, 10_000).m, 94);
        let config = ExperimentConfig::new(ExperimentKind::DoubleStar, vec![10], 1, 0);
        assert_eq!(resolve(&config, 10).oracle, RetrievalMode::PriorAwareMemory);
    }

    #[test]
    fn every_experiment_runs_small() {
        for kind in ExperimentKind::ALL {
            let n = match kind {
                ExperimentKind::DoubleBfs => 200,
                _ => 60,
            };
            let config = ExperimentConfig::new(kind, vec![n, 2 * n], 4, 11);
            let out = run_experiment(&config).unwrap();
            assert_eq!(out.records.len(), 8, "{kind}");
            assert_eq!(out.sweep.points.len(), 2);
            for (record, detail) in out.records.iter().zip(&out.details) {
                if record.status == Status::Found {
                    assert_ne!(detail.grounded, Some(false), "{kind}");
                    assert_ne!(detail.sound, Some(false), "{kind}");
                    assert_ne!(detail.k_connected, Some(false), "{kind}");
                }
            }
        }
    }
}
