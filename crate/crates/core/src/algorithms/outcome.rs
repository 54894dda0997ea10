use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, Path, VertexId};
use crate::oracles::{QueryCounts, QueryKind, TraceEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Found,
    No,
    BudgetExhausted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Found => "FOUND",
            Status::No => "NO",
            Status::BudgetExhausted => "BUDGET_EXHAUSTED",
        }
    }
}

impl std::str::FromStr for Status {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "FOUND" => Ok(Status::Found),
            "NO" => Ok(Status::No),
            "BUDGET_EXHAUSTED" => Ok(Status::BudgetExhausted),
            other => Err(format!("unknown status {other:?}")),
        }
    }
}

/// Where an output edge came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    Prior,
    Retrieved,
    Verified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedEdge {
    pub edge: Edge,
    pub tag: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    Path(Path),
    /// Vertices sorted ascending; edges sorted ascending.
    Subgraph {
        vertices: Vec<VertexId>,
        edges: Vec<Edge>,
    },
}

impl Witness {
    pub fn edges(&self) -> Vec<Edge> {
        match self {
            Witness::Path(path) => path.edges().collect(),
            Witness::Subgraph { edges, .. } => edges.clone(),
        }
    }

    pub fn path(&self) -> Option<&Path> {
        match self {
            Witness::Path(path) => Some(path),
            Witness::Subgraph { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredEdge {
    pub edge: Edge,
    pub color: u32,
}

/// Union of `K` single-color prior segments plus retrieved connectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustSubgraph {
    pub k: usize,
    pub edges: Vec<Edge>,
    /// Color of every prior edge in `edges`, sorted by edge.
    pub route_color: Vec<ColoredEdge>,
}

/// Result of one algorithm run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub status: Status,
    pub witness: Option<Witness>,
    /// One tag per witness edge, sorted by edge.
    pub provenance: Vec<TaggedEdge>,
    pub queries: QueryCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub robust: Option<RobustSubgraph>,
}

impl SearchOutcome {
    pub fn found(witness: Witness, provenance: BTreeMap<Edge, Provenance>, queries: QueryCounts) -> Self {
        SearchOutcome {
            status: Status::Found,
            witness: Some(witness),
            provenance: provenance
                .into_iter()
                .map(|(edge, tag)| TaggedEdge { edge, tag })
                .collect(),
            queries,
            robust: None,
        }
    }

    pub fn no(queries: QueryCounts) -> Self {
        Self::empty(Status::No, queries)
    }

    pub fn exhausted(queries: QueryCounts) -> Self {
        Self::empty(Status::BudgetExhausted, queries)
    }

    fn empty(status: Status, queries: QueryCounts) -> Self {
        SearchOutcome {
            status,
            witness: None,
            provenance: Vec::new(),
            queries,
            robust: None,
        }
    }

    pub fn is_found(&self) -> bool {
        self.status == Status::Found
    }

    pub fn path(&self) -> Option<&Path> {
        self.witness.as_ref().and_then(Witness::path)
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.witness.as_ref().map(Witness::edges).unwrap_or_default()
    }

    pub fn tag_of(&self, e: Edge) -> Option<Provenance> {
        self.provenance
            .binary_search_by(|tagged| tagged.edge.cmp(&e))
            .ok()
            .map(|i| self.provenance[i].tag)
    }
}

/// Tags `edges` as prior edges where possible and `otherwise` elsewhere.
pub(crate) fn tag_edges(
    edges: impl IntoIterator<Item = Edge>,
    prior: &Graph,
    otherwise: Provenance,
) -> BTreeMap<Edge, Provenance> {
    edges
        .into_iter()
        .map(|e| {
            let tag = if prior.contains_edge(e) {
                Provenance::Prior
            } else {
                otherwise
            };
            (e, tag)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundingViolation {
    #[error("edge {0} is in the output but carries no provenance tag")]
    Untagged(Edge),
    #[error("edge {0} is tagged PRIOR but is not a prior edge")]
    NotInPrior(Edge),
    #[error("edge {0} is tagged RETRIEVED but no retrieval or CCI call returned it")]
    NeverRetrieved(Edge),
    #[error("edge {0} is tagged VERIFIED but the verifier never confirmed it")]
    NeverVerified(Edge),
}

/// Replays a FOUND outcome against the session trace: every prior-tagged
/// edge must be in the prior, every retrieved-tagged edge must appear in a
/// retrieval or CCI answer, and every verified-tagged edge must have a
/// `true` verifier call. Non-FOUND outcomes pass trivially.
pub fn audit_grounding(
    outcome: &SearchOutcome,
    prior: &Graph,
    trace: &[TraceEntry],
) -> Result<(), GroundingViolation> {
    if !outcome.is_found() {
        return Ok(());
    }
    let mut retrieved: HashSet<Edge> = HashSet::new();
    let mut verified: HashSet<Edge> = HashSet::new();
    for entry in trace {
        let target = if entry.kind == QueryKind::Verify {
            &mut verified
        } else {
            &mut retrieved
        };
        target.extend(entry.certified_edges());
    }
    for e in outcome.edges() {
        match outcome.tag_of(e) {
            None => return Err(GroundingViolation::Untagged(e)),
            Some(Provenance::Prior) if !prior.contains_edge(e) => {
                return Err(GroundingViolation::NotInPrior(e))
            }
            Some(Provenance::Retrieved) if !retrieved.contains(&e) => {
                return Err(GroundingViolation::NeverRetrieved(e))
            }
            Some(Provenance::Verified) if !verified.contains(&e) => {
                return Err(GroundingViolation::NeverVerified(e))
            }
            Some(_) => {}
        }
    }
    Ok(())
}

/// Checks a FOUND outcome against the truth graph: a path must be simple,
/// run between the first and last terminal and use only truth edges; a
/// subgraph must use only truth edges and connect all terminals.
pub fn is_sound(outcome: &SearchOutcome, truth: &Graph, terminals: &[VertexId]) -> bool {
    match &outcome.witness {
        None => !outcome.is_found(),
        Some(Witness::Path(path)) => {
            path.is_valid_in(truth)
                && path.source() == terminals.first().copied()
                && path.target() == terminals.last().copied()
        }
        Some(Witness::Subgraph { edges, vertices }) => {
            if !edges.iter().all(|e| truth.contains_edge(*e)) {
                return false;
            }
            if !terminals.iter().all(|t| vertices.binary_search(t).is_ok()) {
                return false;
            }
            let sub = match Graph::from_edges(truth.n(), edges.iter().copied()) {
                Ok(g) => g,
                Err(_) => return false,
            };
            let labels = sub.components();
            terminals.windows(2).all(|w| labels.same(w[0], w[1]))
        }
    }
}
