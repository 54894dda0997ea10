//! Retrieval-only probing for collisions and one-sided component scans.

use std::collections::{HashSet, VecDeque};

use rand::Rng;

use super::birag::Augmented;
use super::outcome::tag_edges;
use super::{check_vertex, invalid, AlgorithmError, Provenance, SearchOutcome, Witness};
use crate::graph::{Path, VertexId};
use crate::oracles::{OracleSession, RetrievalAnswer};

/// Alternates memory-oracle queries at `s` and `t`, collecting the revealed
/// neighbor sets, until they touch: either `t` is revealed as a neighbor of
/// `s` (or vice versa), or some vertex is a neighbor of both. The path is
/// `s, t` or `s, w, t`. A side whose answers run out drops out of the
/// alternation; running out of `budget` or of both sides gives
/// `BUDGET_EXHAUSTED`.
pub fn grounded_bidirectional_probe(
    session: &mut OracleSession<'_>,
    s: VertexId,
    t: VertexId,
    budget: usize,
) -> Result<SearchOutcome, AlgorithmError> {
    check_vertex(session.n(), s)?;
    check_vertex(session.n(), t)?;
    if s == t {
        return Err(invalid("t", "endpoints must differ"));
    }
    let ends = [s, t];
    let mut found: [HashSet<VertexId>; 2] = [HashSet::new(), HashSet::new()];
    let mut live = [true, true];
    let mut side = 0;
    let mut spent = 0;
    while spent < budget && (live[0] || live[1]) {
        if !live[side] {
            side ^= 1;
        }
        let (me, other) = (ends[side], ends[side ^ 1]);
        spent += 1;
        match session.memory_retrieval_query(me)? {
            RetrievalAnswer::Bottom => live[side] = false,
            RetrievalAnswer::Neighbor(w) => {
                let path = if w == other {
                    Some(vec![s, t])
                } else if found[side ^ 1].contains(&w) {
                    Some(vec![s, w, t])
                } else {
                    found[side].insert(w);
                    None
                };
                if let Some(vertices) = path {
                    let path = Path::new(vertices);
                    let tags = tag_edges(path.edges(), session.prior(), Provenance::Retrieved);
                    return Ok(SearchOutcome::found(Witness::Path(path), tags, session.counts()));
                }
            }
        }
        side ^= 1;
    }
    Ok(SearchOutcome::exhausted(session.counts()))
}

/// Grows the set of vertices reachable from `s` through the prior and
/// retrieved edges, querying a uniformly random member of that set each
/// step with the session's retrieval oracle, until `t` joins it.
///
/// A member leaves the pool once it answers `Bottom`. Under the memory
/// oracle an empty pool means every truth edge leaving the reached set has
/// been revealed, so `t` is unreachable and the answer is `NO`. After
/// `budget` queries the result is `BUDGET_EXHAUSTED`.
pub fn prior_component_scan(
    session: &mut OracleSession<'_>,
    s: VertexId,
    t: VertexId,
    budget: usize,
) -> Result<SearchOutcome, AlgorithmError> {
    check_vertex(session.n(), s)?;
    check_vertex(session.n(), t)?;
    if s == t {
        return Err(invalid("t", "endpoints must differ"));
    }
    let prior = session.prior();
    let mut reached = vec![false; session.n()];
    let mut pool: Vec<VertexId> = Vec::new();
    let absorb = |start: VertexId, reached: &mut Vec<bool>, pool: &mut Vec<VertexId>| {
        if reached[start.index()] {
            return;
        }
        reached[start.index()] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            pool.push(u);
            for w in prior.neighbors(u) {
                if !reached[w.index()] {
                    reached[w.index()] = true;
                    queue.push_back(w);
                }
            }
        }
    };
    absorb(s, &mut reached, &mut pool);
    let mut augmented = Augmented::default();
    let mut spent = 0;
    while !reached[t.index()] {
        if pool.is_empty() {
            return Ok(SearchOutcome::no(session.counts()));
        }
        if spent == budget {
            return Ok(SearchOutcome::exhausted(session.counts()));
        }
        spent += 1;
        let i = session.rng().random_range(0..pool.len());
        let u = pool[i];
        match session.retrieve(u)? {
            RetrievalAnswer::Bottom => {
                pool.swap_remove(i);
            }
            RetrievalAnswer::Neighbor(w) => {
                augmented.add(u, w);
                absorb(w, &mut reached, &mut pool);
            }
        }
    }
    let path = augmented.path(session, s, t).expect("t was reached");
    let tags = tag_edges(path.edges(), session.prior(), Provenance::Retrieved);
    Ok(SearchOutcome::found(Witness::Path(path), tags, session.counts()))
}
