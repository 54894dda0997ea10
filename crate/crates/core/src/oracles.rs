//! Query gateways over a [`WorldPair`].
//!
//! An [`OracleSession`] is the only handle algorithms get on a world. It
//! exposes the prior graph directly and the truth graph only through four
//! kinds of queries:
//!
//! * retrieval: a uniformly random truth neighbor, or `Bottom` when the
//!   vertex is isolated in the truth;
//! * prior-aware memory retrieval: uniform over truth neighbors whose edge
//!   is neither in the prior nor previously returned, or `Bottom`;
//! * component cross-edge inspection (CCI): every truth edge leaving the
//!   prior component of the queried vertex, or `Bottom`;
//! * edge verification: whether a pair is a truth edge.
//!
//! Every call is charged, including `Bottom` answers. Sessions own their RNG
//! and are deterministic given the seed and the query sequence.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::WorldPair;
use crate::graph::{ComponentLabeling, Edge, Graph, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("verifier called on the self-pair ({0}, {0})")]
    SelfPair(VertexId),
}

/// Which retrieval oracle [`OracleSession::retrieve`] dispatches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RetrievalMode {
    #[default]
    Plain,
    PriorAwareMemory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RetrievalAnswer {
    Neighbor(VertexId),
    Bottom,
}

impl RetrievalAnswer {
    pub fn neighbor(self) -> Option<VertexId> {
        match self {
            RetrievalAnswer::Neighbor(v) => Some(v),
            RetrievalAnswer::Bottom => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CciAnswer {
    /// Nonempty, sorted ascending.
    Edges(Vec<Edge>),
    Bottom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct QueryCounts {
    pub retrieval: u64,
    pub cci: u64,
    pub verify: u64,
}

impl QueryCounts {
    pub fn total(&self) -> u64 {
        self.retrieval + self.cci + self.verify
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionStats {
    pub counts: QueryCounts,
    pub revealed_edges: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QueryKind {
    Retrieval,
    MemoryRetrieval,
    Cci,
    Verify,
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryKind::Retrieval => "retrieval",
            QueryKind::MemoryRetrieval => "memory-retrieval",
            QueryKind::Cci => "cci",
            QueryKind::Verify => "verify",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceAnswer {
    Bottom,
    Neighbor(VertexId),
    Edges(Vec<Edge>),
    Verdict(bool),
}

/// One logged oracle call. Verification calls carry the pair in `arg` and
/// `partner`; all others carry only `arg`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub kind: QueryKind,
    pub arg: VertexId,
    pub partner: Option<VertexId>,
    pub answer: TraceAnswer,
}

impl TraceEntry {
    /// Edges this call certified as truth edges.
    pub fn certified_edges(&self) -> Vec<Edge> {
        match (&self.answer, self.partner) {
            (TraceAnswer::Neighbor(v), _) => vec![Edge::new(self.arg, *v)],
            (TraceAnswer::Edges(edges), _) => edges.clone(),
            (TraceAnswer::Verdict(true), Some(w)) => vec![Edge::new(self.arg, w)],
            _ => Vec::new(),
        }
    }
}

/// Renders as `kind arg answer`, e.g. `retrieval 5 7`, `cci 3 1-4,2-9`,
/// `verify 3-4 true`.
impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.arg)?;
        if let Some(w) = self.partner {
            write!(f, "-{w}")?;
        }
        match &self.answer {
            TraceAnswer::Bottom => f.write_str(" BOTTOM"),
            TraceAnswer::Neighbor(v) => write!(f, " {v}"),
            TraceAnswer::Verdict(b) => write!(f, " {b}"),
            TraceAnswer::Edges(edges) => {
                f.write_str(" ")?;
                for (i, e) in edges.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
        }
    }
}

/// Stateful, single-owner oracle gateway.
pub struct OracleSession<'w> {
    world: &'w WorldPair,
    rng: ChaCha8Rng,
    mode: RetrievalMode,
    counts: QueryCounts,
    /// Every edge returned by a retrieval or CCI call.
    revealed: HashSet<Edge>,
    /// Edges returned by either retrieval oracle; the memory oracle also
    /// treats every prior edge as seen.
    retrieved: HashSet<Edge>,
    confirmed: HashSet<Edge>,
    /// Memory-oracle candidates per vertex, built on first query. Entries
    /// that became seen from the other endpoint are dropped lazily.
    unseen: HashMap<VertexId, Vec<VertexId>>,
    cci: Option<CciIndex>,
    trace: Option<Vec<TraceEntry>>,
}

struct CciIndex {
    labels: ComponentLabeling,
    members: BTreeMap<VertexId, Vec<VertexId>>,
}

impl<'w> OracleSession<'w> {
    pub fn new(world: &'w WorldPair, seed: u64) -> Self {
        OracleSession {
            world,
            rng: ChaCha8Rng::seed_from_u64(seed),
            mode: RetrievalMode::Plain,
            counts: QueryCounts::default(),
            revealed: HashSet::new(),
            retrieved: HashSet::new(),
            confirmed: HashSet::new(),
            unseen: HashMap::new(),
            cci: None,
            trace: None,
        }
    }

    pub fn with_mode(mut self, mode: RetrievalMode) -> Self {
        self.mode = mode;
        self
    }

    /// Enables the call trace.
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn mode(&self) -> RetrievalMode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.world.n()
    }

    pub fn prior(&self) -> &'w Graph {
        self.world.prior()
    }

    pub fn counts(&self) -> QueryCounts {
        self.counts
    }

    pub fn session_stats(&self) -> SessionStats {
        SessionStats {
            counts: self.counts,
            revealed_edges: self.revealed.len(),
        }
    }

    pub fn revealed(&self) -> &HashSet<Edge> {
        &self.revealed
    }

    /// Pairs the verifier answered `true` for.
    pub fn confirmed(&self) -> &HashSet<Edge> {
        &self.confirmed
    }

    pub fn trace(&self) -> Option<&[TraceEntry]> {
        self.trace.as_deref()
    }

    /// Trace lines as text, one per call.
    pub fn trace_lines(&self) -> Vec<String> {
        self.trace
            .iter()
            .flatten()
            .map(|entry| entry.to_string())
            .collect()
    }

    /// Draws from a random generator owned by the session, for algorithms
    /// that need their own randomness (e.g. a scan order).
    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn check(&self, v: VertexId) -> Result<(), OracleError> {
        if v.index() < self.n() {
            Ok(())
        } else {
            Err(OracleError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    fn log(&mut self, kind: QueryKind, arg: VertexId, partner: Option<VertexId>, answer: TraceAnswer) {
        if let Some(trace) = &mut self.trace {
            trace.push(TraceEntry {
                kind,
                arg,
                partner,
                answer,
            });
        }
    }

    fn record_retrieval(&mut self, kind: QueryKind, u: VertexId, answer: RetrievalAnswer) {
        self.counts.retrieval += 1;
        if let RetrievalAnswer::Neighbor(v) = answer {
            let e = Edge::new(u, v);
            self.revealed.insert(e);
            self.retrieved.insert(e);
        }
        let logged = match answer {
            RetrievalAnswer::Neighbor(v) => TraceAnswer::Neighbor(v),
            RetrievalAnswer::Bottom => TraceAnswer::Bottom,
        };
        self.log(kind, u, None, logged);
    }

    /// Dispatches to the retrieval oracle selected by [`Self::with_mode`].
    pub fn retrieve(&mut self, u: VertexId) -> Result<RetrievalAnswer, OracleError> {
        match self.mode {
            RetrievalMode::Plain => self.retrieval_query(u),
            RetrievalMode::PriorAwareMemory => self.memory_retrieval_query(u),
        }
    }

    /// Uniform truth neighbor of `u`, or `Bottom` if `u` is isolated.
    pub fn retrieval_query(&mut self, u: VertexId) -> Result<RetrievalAnswer, OracleError> {
        self.check(u)?;
        let truth = self.world.truth();
        let degree = truth.degree(u);
        let answer = if degree == 0 {
            RetrievalAnswer::Bottom
        } else {
            RetrievalAnswer::Neighbor(truth.neighbor_at(u, self.rng.random_range(0..degree)))
        };
        self.record_retrieval(QueryKind::Retrieval, u, answer);
        Ok(answer)
    }

    /// Uniform over truth neighbors `v` of `u` with `(u, v)` neither a
    /// prior edge nor previously retrieved; `Bottom` when none remain.
    pub fn memory_retrieval_query(&mut self, u: VertexId) -> Result<RetrievalAnswer, OracleError> {
        self.check(u)?;
        let world = self.world;
        let candidates = self.unseen.entry(u).or_insert_with(|| {
            world
                .truth()
                .neighbors(u)
                .filter(|&v| !world.prior().has_edge(u, v))
                .collect()
        });
        let mut answer = RetrievalAnswer::Bottom;
        while !candidates.is_empty() {
            let v = candidates.swap_remove(self.rng.random_range(0..candidates.len()));
            if !self.retrieved.contains(&Edge::new(u, v)) {
                answer = RetrievalAnswer::Neighbor(v);
                break;
            }
        }
        self.record_retrieval(QueryKind::MemoryRetrieval, u, answer);
        Ok(answer)
    }

    fn cci_index(&mut self) -> &CciIndex {
        let prior = self.world.prior();
        self.cci.get_or_insert_with(|| {
            let labels = prior.components();
            let members = labels.members();
            CciIndex { labels, members }
        })
    }

    /// Prior component label of `v` as seen by the CCI oracle.
    pub fn cci_component(&mut self, v: VertexId) -> Result<VertexId, OracleError> {
        self.check(v)?;
        Ok(self.cci_index().labels.label(v))
    }

    /// Every truth edge with exactly one endpoint in the prior component of
    /// `v`, or `Bottom` if there are none. Components are those of the prior
    /// alone and do not change during a session.
    pub fn cci_query(&mut self, v: VertexId) -> Result<CciAnswer, OracleError> {
        self.check(v)?;
        let world = self.world;
        let truth = world.truth();
        let index = self.cci_index();
        let home = index.labels.label(v);
        let mut edges: Vec<Edge> = Vec::new();
        for &u in &index.members[&home] {
            for w in truth.neighbors(u) {
                if index.labels.label(w) != home {
                    edges.push(Edge::new(u, w));
                }
            }
        }
        edges.sort_unstable();
        self.counts.cci += 1;
        self.revealed.extend(edges.iter().copied());
        let answer = if edges.is_empty() {
            CciAnswer::Bottom
        } else {
            CciAnswer::Edges(edges)
        };
        let logged = match &answer {
            CciAnswer::Edges(edges) => TraceAnswer::Edges(edges.clone()),
            CciAnswer::Bottom => TraceAnswer::Bottom,
        };
        self.log(QueryKind::Cci, v, None, logged);
        Ok(answer)
    }

    /// Whether `(u, v)` is a truth edge.
    pub fn verify_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, OracleError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(OracleError::SelfPair(u));
        }
        let verdict = self.world.truth().has_edge(u, v);
        self.counts.verify += 1;
        if verdict {
            self.confirmed.insert(Edge::new(u, v));
        }
        self.log(QueryKind::Verify, u, Some(v), TraceAnswer::Verdict(verdict));
        Ok(verdict)
    }
}
