//! Candidate generation from an unreliable prior, certified edge by edge.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{check_vertex, invalid, AlgorithmError, Provenance, SearchOutcome, Witness};
use crate::graph::{Edge, Graph, Path, VertexId};
use crate::oracles::OracleSession;

/// Enumerates simple `s`-`t` paths of the prior with at most `c` edges,
/// shortest first and lexicographically by vertex sequence within a length,
/// and verifies each left to right, abandoning a candidate at its first
/// rejected edge. Verdicts are cached, so no pair is sent to the verifier
/// twice.
///
/// Returns the first fully verified path, `NO` once candidates run out, or
/// `BUDGET_EXHAUSTED` if more than `max_candidates` would be examined.
pub fn generate_then_verify(
    session: &mut OracleSession<'_>,
    s: VertexId,
    t: VertexId,
    c: usize,
    max_candidates: usize,
) -> Result<SearchOutcome, AlgorithmError> {
    check_vertex(session.n(), s)?;
    check_vertex(session.n(), t)?;
    if c == 0 {
        return Err(invalid("c", "must be at least 1"));
    }
    if s == t {
        return Err(invalid("t", "endpoints must differ"));
    }
    if max_candidates == 0 {
        return Err(invalid("max_candidates", "must be positive"));
    }
    let prior = session.prior();
    let dist = distances_within(prior, t, c);
    let mut search = Search {
        session,
        verdicts: HashMap::new(),
        examined: 0,
        max_candidates,
        accepted: None,
        exhausted: false,
    };
    let mut stack = vec![s];
    let mut on_path = vec![false; prior.n()];
    on_path[s.index()] = true;
    for length in 1..=c {
        if dist[s.index()] > length {
            continue;
        }
        if search.extend(prior, &dist, t, length, &mut stack, &mut on_path)? {
            break;
        }
    }
    let counts = search.session.counts();
    if search.exhausted {
        return Ok(SearchOutcome::exhausted(counts));
    }
    match search.accepted {
        Some(path) => {
            let tags: BTreeMap<Edge, Provenance> =
                path.edges().map(|e| (e, Provenance::Verified)).collect();
            Ok(SearchOutcome::found(Witness::Path(path), tags, counts))
        }
        None => Ok(SearchOutcome::no(counts)),
    }
}

struct Search<'a, 'w> {
    session: &'a mut OracleSession<'w>,
    verdicts: HashMap<Edge, bool>,
    examined: usize,
    max_candidates: usize,
    accepted: Option<Path>,
    exhausted: bool,
}

impl Search<'_, '_> {
    /// Depth-first extension of `stack` to paths with exactly `length`
    /// edges. Returns `true` when the search should stop.
    fn extend(
        &mut self,
        prior: &Graph,
        dist: &[usize],
        t: VertexId,
        length: usize,
        stack: &mut Vec<VertexId>,
        on_path: &mut [bool],
    ) -> Result<bool, AlgorithmError> {
        let u = *stack.last().expect("nonempty");
        let used = stack.len() - 1;
        if used == length {
            return if u == t { self.check(stack) } else { Ok(false) };
        }
        let remaining = length - used - 1;
        for w in prior.neighbors(u) {
            if on_path[w.index()] || dist[w.index()] > remaining || (w == t && remaining > 0) {
                continue;
            }
            stack.push(w);
            on_path[w.index()] = true;
            let stop = self.extend(prior, dist, t, length, stack, on_path)?;
            on_path[w.index()] = false;
            stack.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn check(&mut self, candidate: &[VertexId]) -> Result<bool, AlgorithmError> {
        if self.examined == self.max_candidates {
            self.exhausted = true;
            return Ok(true);
        }
        self.examined += 1;
        for pair in candidate.windows(2) {
            let e = Edge::new(pair[0], pair[1]);
            let verdict = match self.verdicts.get(&e) {
                Some(&v) => v,
                None => {
                    let v = self.session.verify_edge(pair[0], pair[1])?;
                    self.verdicts.insert(e, v);
                    v
                }
            };
            if !verdict {
                return Ok(false);
            }
        }
        self.accepted = Some(Path::new(candidate.to_vec()));
        Ok(true)
    }
}

/// Prior BFS distances to `t`, saturated at `limit + 1`.
fn distances_within(prior: &Graph, t: VertexId, limit: usize) -> Vec<usize> {
    let far = limit + 1;
    let mut dist = vec![far; prior.n()];
    dist[t.index()] = 0;
    let mut queue = VecDeque::from([t]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u.index()];
        if d == limit {
            continue;
        }
        for w in prior.neighbors(u) {
            if dist[w.index()] == far {
                dist[w.index()] = d + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{audit_grounding, is_sound, Status};
    use crate::generators::{Family, WorldPair};

    fn v(i: usize) -> VertexId {
        VertexId::new(i)
    }

    fn world(n: usize, truth: &[(usize, usize)], prior: &[(usize, usize)]) -> WorldPair {
        WorldPair::new(
            Graph::from_edges(n, truth.iter().copied()).unwrap(),
            Graph::from_edges(n, prior.iter().copied()).unwrap(),
            Family::Custom,
        )
        .unwrap()
    }

    #[test]
    fn true_prior_path_costs_c_calls() {
        let edges = [(0, 1), (1, 2), (2, 3)];
        let w = world(4, &edges, &edges);
        let mut session = OracleSession::new(&w, 0);
        let out = generate_then_verify(&mut session, v(0), v(3), 3, 100).unwrap();
        assert_eq!(out.status, Status::Found);
        assert_eq!(out.queries.verify, 3);
    }

    #[test]
    fn no_short_prior_path() {
        let edges = [(0, 1), (1, 2), (2, 3)];
        let w = world(4, &edges, &edges);
        let mut session = OracleSession::new(&w, 0);
        let out = generate_then_verify(&mut session, v(0), v(3), 2, 100).unwrap();
        assert_eq!(out.status, Status::No);
        assert_eq!(out.queries.verify, 0);
    }

    #[test]
    fn skips_false_edges_and_caches() {
        // Prior: 0-1-3 (1-3 false), 0-2-3 (true), 0-1-2-3 would reuse 0-1.
        let truth = [(0, 1), (0, 2), (2, 3), (1, 2)];
        let prior = [(0, 1), (1, 3), (0, 2), (2, 3), (1, 2)];
        let w = world(4, &truth, &prior);
        let mut session = OracleSession::new(&w, 0).with_trace();
        let out = generate_then_verify(&mut session, v(0), v(3), 3, 100).unwrap();
        assert_eq!(out.status, Status::Found);
        // Candidates in order: [0,1,3] (verify 0-1 yes, 1-3 no), [0,2,3].
        assert_eq!(out.path().unwrap().vertices(), &[v(0), v(2), v(3)]);
        assert_eq!(out.queries.verify, 4);
        assert!(is_sound(&out, w.truth(), &[v(0), v(3)]));
        audit_grounding(&out, w.prior(), session.trace().unwrap()).unwrap();
    }

    #[test]
    fn candidate_budget() {
        let truth = [(0, 1)];
        let prior = [(0, 1), (1, 3), (0, 2), (2, 3)];
        let w = world(4, &truth, &prior);
        let mut session = OracleSession::new(&w, 0);
        let out = generate_then_verify(&mut session, v(0), v(3), 3, 1).unwrap();
        assert_eq!(out.status, Status::BudgetExhausted);
        let mut session = OracleSession::new(&w, 0);
        let out = generate_then_verify(&mut session, v(0), v(3), 3, 10).unwrap();
        assert_eq!(out.status, Status::No);
    }

    #[test]
    fn enumeration_order_is_shortest_then_lexicographic() {
        // Complete prior on 5 vertices, truth only 0-4 path 0-3-4.
        let prior: Vec<(usize, usize)> = (0..5)
            .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
            .collect();
        let w = world(5, &[(0, 3), (3, 4)], &prior);
        let mut session = OracleSession::new(&w, 0).with_trace();
        let out = generate_then_verify(&mut session, v(0), v(4), 3, 100).unwrap();
        assert_eq!(out.path().unwrap().vertices(), &[v(0), v(3), v(4)]);
        let lines = session.trace_lines();
        assert_eq!(
            lines,
            vec![
                "verify 0-4 false",
                "verify 0-1 false",
                "verify 0-2 false",
                "verify 0-3 true",
                "verify 3-4 true"
            ]
        );
    }
}
