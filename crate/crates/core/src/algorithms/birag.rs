//! Bidirectional retrieval-augmented generation.

use std::collections::HashMap;

use super::outcome::tag_edges;
use super::{check_vertex, invalid, AlgorithmError, Provenance, SearchOutcome, Witness};
use crate::graph::{bfs_path_by, Path, VertexId};
use crate::oracles::{OracleSession, RetrievalAnswer};

/// Prior graph plus edges retrieved so far.
#[derive(Default)]
pub(crate) struct Augmented {
    extra: HashMap<VertexId, Vec<VertexId>>,
}

impl Augmented {
    pub(crate) fn add(&mut self, u: VertexId, v: VertexId) {
        self.extra.entry(u).or_default().push(v);
        self.extra.entry(v).or_default().push(u);
    }

    pub(crate) fn path(&self, session: &OracleSession<'_>, s: VertexId, t: VertexId) -> Option<Path> {
        let prior = session.prior();
        bfs_path_by(session.n(), s, t, |u| {
            prior
                .neighbors(u)
                .chain(self.extra.get(&u).into_iter().flatten().copied())
        })
    }
}

/// Alternates path generation on the augmented graph with one retrieval
/// query at each endpoint.
///
/// Generation runs before the first query, so endpoints already joined by
/// the prior cost nothing. A `Bottom` answer at either endpoint means it is
/// isolated in the truth and yields `NO`. After `max_iterations` query
/// rounds without a path the result is `BUDGET_EXHAUSTED`.
pub fn birag(
    session: &mut OracleSession<'_>,
    s: VertexId,
    t: VertexId,
    max_iterations: usize,
) -> Result<SearchOutcome, AlgorithmError> {
    check_vertex(session.n(), s)?;
    check_vertex(session.n(), t)?;
    if s == t {
        return Err(invalid("t", "endpoints must differ"));
    }
    if max_iterations == 0 {
        return Err(invalid("max_iterations", "must be positive"));
    }
    let mut augmented = Augmented::default();
    for round in 0..=max_iterations {
        if let Some(path) = augmented.path(session, s, t) {
            let tags = tag_edges(path.edges(), session.prior(), Provenance::Retrieved);
            return Ok(SearchOutcome::found(Witness::Path(path), tags, session.counts()));
        }
        if round == max_iterations {
            break;
        }
        let from_s = session.retrieve(s)?;
        let from_t = session.retrieve(t)?;
        match (from_s, from_t) {
            (RetrievalAnswer::Neighbor(a), RetrievalAnswer::Neighbor(b)) => {
                augmented.add(s, a);
                augmented.add(t, b);
            }
            _ => return Ok(SearchOutcome::no(session.counts())),
        }
    }
    Ok(SearchOutcome::exhausted(session.counts()))
}
