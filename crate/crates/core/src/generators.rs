//! World-pair generators: a ground-truth graph together with the prior graph
//! an algorithm starts from.
//!
//! Forward sampling is used throughout: draw the truth first, then thin it
//! into the prior. The reverse construction (draw the prior, then add each
//! missing pair with probability [`readd_probability`]) gives the same joint
//! law for the Erdős-Rényi families.

use std::collections::HashSet;
use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::Path as FsPath;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Geometric};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{read_edge_list, write_edge_list, Edge, Graph, GraphError, VertexId};
use crate::seed::derive;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("meta.json: {0}")]
    Json(#[from] serde_json::Error),
}

fn invalid(name: &'static str, reason: impl Into<String>) -> GenError {
    GenError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

fn check_probability(name: &'static str, x: f64) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(invalid(name, format!("{x} is not in [0, 1]")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErPriorParams {
    pub n: usize,
    pub p: f64,
    pub eta: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleStarParams {
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionParams {
    pub group_sizes: Vec<usize>,
    pub p: f64,
    pub eta: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoisyPriorParams {
    pub n: usize,
    pub p: f64,
    pub eta: f64,
    pub r: f64,
    pub seed: u64,
}

/// Construction details of a double star. Analysis-only: nothing in the
/// algorithm layer can reach it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleStarLayout {
    pub center_s: VertexId,
    pub center_t: VertexId,
    pub bridge: Edge,
}

/// Generator tag plus parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Er(ErPriorParams),
    DoubleStar {
        #[serde(flatten)]
        params: DoubleStarParams,
        hidden: DoubleStarLayout,
    },
    Partitioned(PartitionParams),
    NoisyPrior {
        #[serde(flatten)]
        params: NoisyPriorParams,
        false_edges: usize,
    },
    CompleteEmpty {
        n: usize,
    },
    /// Loaded from edge lists with no generator information.
    Custom,
}

/// Ground truth `G*` and prior `G` on the same vertex set.
#[derive(Debug, Clone)]
pub struct WorldPair {
    truth: Graph,
    prior: Graph,
    family: Family,
    prior_reliable: bool,
}

impl WorldPair {
    /// Pairs two graphs; `prior_reliable` is derived from the edge sets.
    pub fn new(truth: Graph, prior: Graph, family: Family) -> Result<Self, GenError> {
        if truth.n() != prior.n() {
            return Err(invalid(
                "prior",
                format!("prior has {} vertices, truth has {}", prior.n(), truth.n()),
            ));
        }
        let prior_reliable = prior.is_subgraph_of(&truth);
        Ok(WorldPair {
            truth,
            prior,
            family,
            prior_reliable,
        })
    }

    pub fn n(&self) -> usize {
        self.truth.n()
    }

    pub fn truth(&self) -> &Graph {
        &self.truth
    }

    pub fn prior(&self) -> &Graph {
        &self.prior
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn prior_reliable(&self) -> bool {
        self.prior_reliable
    }
}

/// `G(n, p)` driven solely by `seed`. Uses geometric skipping over the
/// pair sequence when `p < 0.1`, and a coin per pair otherwise.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Graph {
    assert!((0.0..=1.0).contains(&p), "p = {p} outside [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    if n < 2 || p == 0.0 {
        return Graph::empty(n);
    }
    if p < 0.1 {
        // Pairs (w, v) with w < v, ordered by v then w; (v, 0) sits at
        // linear index v(v-1)/2.
        let total = (n as u64) * (n as u64 - 1) / 2;
        let geometric = Geometric::new(p).expect("0 < p < 1");
        edges.reserve((total as f64 * p * 1.1) as usize);
        let mut cursor = 0u64;
        let mut v = 1u64;
        let mut row_start = 0u64;
        loop {
            let skip = geometric.sample(&mut rng);
            let pos = match cursor.checked_add(skip) {
                Some(pos) if pos < total => pos,
                _ => break,
            };
            while pos >= row_start + v {
                row_start += v;
                v += 1;
            }
            edges.push(((pos - row_start) as usize, v as usize));
            cursor = pos + 1;
        }
    } else {
        for v in 1..n {
            for w in 0..v {
                if rng.random_bool(p) {
                    edges.push((w, v));
                }
            }
        }
    }
    Graph::from_edges(n, edges).expect("generated pairs are in range")
}

/// Keeps each edge of `truth` independently with probability `eta`.
pub fn subsample_prior(truth: &Graph, eta: f64, seed: u64) -> Graph {
    assert!((0.0..=1.0).contains(&eta), "eta = {eta} outside [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    truth.filter_edges(|_| rng.random_bool(eta))
}

/// Probability with which each non-prior pair must be added to a
/// `G(n, p eta)` prior to obtain a `G(n, p)` truth: `(p - p eta) / (1 - p eta)`.
pub fn readd_probability(p: f64, eta: f64) -> f64 {
    let pe = p * eta;
    if pe >= 1.0 {
        0.0
    } else {
        (p - pe) / (1.0 - pe)
    }
}

/// Truth `G(n, p)`, prior keeps each truth edge with probability `eta`.
pub fn gen_er_prior(params: ErPriorParams) -> Result<WorldPair, GenError> {
    check_probability("p", params.p)?;
    check_probability("eta", params.eta)?;
    let truth = gen_er(params.n, params.p, derive(params.seed, 0));
    let prior = subsample_prior(&truth, params.eta, derive(params.seed, 1));
    Ok(WorldPair {
        truth,
        prior,
        family: Family::Er(params),
        prior_reliable: true,
    })
}

/// Two stars on the halves `S = [0, n/2)` and `T = [n/2, n)` plus one
/// leaf-to-leaf bridge that is missing from the prior.
pub fn gen_double_star(params: DoubleStarParams) -> Result<WorldPair, GenError> {
    let n = params.n;
    if n < 6 || !n.is_multiple_of(2) {
        return Err(invalid("n", format!("{n} must be even and at least 6")));
    }
    let half = n / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let center_s = rng.random_range(0..half);
    let center_t = rng.random_range(half..n);
    // Uniform over the half minus its center.
    let mut leaf = |lo: usize, center: usize| {
        let x = rng.random_range(lo..lo + half - 1);
        if x >= center {
            x + 1
        } else {
            x
        }
    };
    let u = leaf(0, center_s);
    let v = leaf(half, center_t);

    let star = |lo: usize, center: usize| {
        (lo..lo + half)
            .filter(move |&x| x != center)
            .map(move |x| (center, x))
    };
    let prior_edges: Vec<(usize, usize)> = star(0, center_s).chain(star(half, center_t)).collect();
    let prior = Graph::from_edges(n, prior_edges.iter().copied())?;
    let truth = Graph::from_edges(n, prior_edges.into_iter().chain([(u, v)]))?;
    Ok(WorldPair {
        truth,
        prior,
        family: Family::DoubleStar {
            params,
            hidden: DoubleStarLayout {
                center_s: VertexId::new(center_s),
                center_t: VertexId::new(center_t),
                bridge: Edge::from_indices(u, v),
            },
        },
        prior_reliable: true,
    })
}

/// Group index of every vertex for contiguous groups of the given sizes.
pub fn group_of(group_sizes: &[usize]) -> Vec<usize> {
    group_sizes
        .iter()
        .enumerate()
        .flat_map(|(g, &size)| std::iter::repeat_n(g, size))
        .collect()
}

/// Truth `G(n, p)`; the prior keeps intra-group truth edges with
/// probability `eta` and drops every inter-group edge.
pub fn gen_partitioned(params: PartitionParams) -> Result<WorldPair, GenError> {
    if params.group_sizes.is_empty() {
        return Err(invalid("group_sizes", "need at least one group"));
    }
    if params.group_sizes.contains(&0) {
        return Err(invalid("group_sizes", "group sizes must be positive"));
    }
    check_probability("p", params.p)?;
    check_probability("eta", params.eta)?;
    let n: usize = params.group_sizes.iter().sum();
    let group = group_of(&params.group_sizes);
    let truth = gen_er(n, params.p, derive(params.seed, 0));
    let mut rng = ChaCha8Rng::seed_from_u64(derive(params.seed, 1));
    let prior = truth.filter_edges(|e| {
        group[e.lo().index()] == group[e.hi().index()] && rng.random_bool(params.eta)
    });
    Ok(WorldPair {
        truth,
        prior,
        family: Family::Partitioned(params),
        prior_reliable: true,
    })
}

/// Truth `G(n, p)`; prior = retained truth edges `T` plus false edges `F`
/// drawn uniformly from non-truth pairs, with
/// `|F| ~ Binomial(#non-truth pairs, mean |T| (1 - r) / r)`. A prior edge
/// is then a truth edge with probability `r` in expectation.
pub fn gen_noisy_prior(params: NoisyPriorParams) -> Result<WorldPair, GenError> {
    let NoisyPriorParams { n, p, eta, r, seed } = params;
    check_probability("p", p)?;
    check_probability("eta", eta)?;
    if !(r > 0.0 && r <= 1.0) {
        return Err(invalid("r", format!("{r} is not in (0, 1]")));
    }
    let truth = gen_er(n, p, derive(seed, 0));
    let kept = subsample_prior(&truth, eta, derive(seed, 1));

    let mut rng = ChaCha8Rng::seed_from_u64(derive(seed, 2));
    let pairs = (n as u64) * (n as u64).saturating_sub(1) / 2;
    let free = pairs - truth.edge_count() as u64;
    let mean = kept.edge_count() as f64 * (1.0 - r) / r;
    let false_count = if free == 0 || mean == 0.0 {
        0
    } else {
        let q = (mean / free as f64).min(1.0);
        Binomial::new(free, q).expect("valid binomial").sample(&mut rng) as usize
    };

    let mut chosen: HashSet<Edge> = HashSet::with_capacity(false_count);
    if (false_count as u64) * 2 <= free {
        while chosen.len() < false_count {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a == b {
                continue;
            }
            let e = Edge::from_indices(a, b);
            if !truth.contains_edge(e) {
                chosen.insert(e);
            }
        }
    } else {
        let mut all: Vec<Edge> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| Edge::from_indices(a, b)))
            .filter(|e| !truth.contains_edge(*e))
            .collect();
        all.shuffle(&mut rng);
        chosen.extend(all.into_iter().take(false_count));
    }
    let prior = Graph::from_edges(n, kept.edges().chain(chosen.iter().copied()))?;
    Ok(WorldPair {
        truth,
        prior,
        family: Family::NoisyPrior {
            params,
            false_edges: false_count,
        },
        prior_reliable: false_count == 0,
    })
}

/// Complete truth, empty prior.
pub fn gen_complete_empty(n: usize) -> Result<WorldPair, GenError> {
    if n < 2 {
        return Err(invalid("n", format!("{n} must be at least 2")));
    }
    Ok(WorldPair {
        truth: Graph::complete(n),
        prior: Graph::empty(n),
        family: Family::CompleteEmpty { n },
        prior_reliable: true,
    })
}

/// Prior components collapsed to super-nodes; two super-nodes are adjacent
/// iff some truth edge joins their members.
#[derive(Debug, Clone)]
pub struct MetaGraph {
    pub meta: Graph,
    /// Super-node of every original vertex. Super-nodes are numbered in
    /// order of their smallest member.
    pub membership: Vec<VertexId>,
}

pub fn contract_components(world: &WorldPair) -> MetaGraph {
    let labels = world.prior().components();
    let mut super_of_label = std::collections::HashMap::new();
    for (i, (&label, _)) in labels.sizes().iter().enumerate() {
        super_of_label.insert(label, VertexId::new(i));
    }
    let membership: Vec<VertexId> = labels
        .labels()
        .iter()
        .map(|l| super_of_label[l])
        .collect();
    let cross = world.truth().edges().filter_map(|e| {
        let (a, b) = (membership[e.lo().index()], membership[e.hi().index()]);
        (a != b).then_some(Edge::new(a, b))
    });
    let meta = Graph::from_edges(labels.component_count(), cross).expect("super-nodes in range");
    MetaGraph { meta, membership }
}

#[derive(Serialize, Deserialize)]
struct WorldMeta {
    n: usize,
    prior_reliable: bool,
    generator: Family,
}

/// Writes `truth.edges`, `prior.edges` and `meta.json` into `dir`.
pub fn save_world(world: &WorldPair, dir: &FsPath) -> Result<(), GenError> {
    fs::create_dir_all(dir)?;
    write_edge_list(world.truth(), BufWriter::new(fs::File::create(dir.join("truth.edges"))?))?;
    write_edge_list(world.prior(), BufWriter::new(fs::File::create(dir.join("prior.edges"))?))?;
    let meta = WorldMeta {
        n: world.n(),
        prior_reliable: world.prior_reliable(),
        generator: world.family().clone(),
    };
    fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

pub fn load_world(dir: &FsPath) -> Result<WorldPair, GenError> {
    let truth = read_edge_list(BufReader::new(fs::File::open(dir.join("truth.edges"))?))?;
    let prior = read_edge_list(BufReader::new(fs::File::open(dir.join("prior.edges"))?))?;
    let family = match fs::read_to_string(dir.join("meta.json")) {
        Ok(text) => serde_json::from_str::<WorldMeta>(&text)?.generator,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Family::Custom,
        Err(e) => return Err(e.into()),
    };
    WorldPair::new(truth, prior, family)
}
