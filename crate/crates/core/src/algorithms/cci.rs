//! Path search with component cross-edge inspection queries.

use std::collections::VecDeque;

use super::birag::Augmented;
use super::outcome::tag_edges;
use super::{check_vertex, invalid, AlgorithmError, Provenance, SearchOutcome, Witness};
use crate::graph::VertexId;
use crate::oracles::{CciAnswer, OracleSession};

const FROM_S: u8 = 1;
const FROM_T: u8 = 2;

/// Bidirectional breadth-first search over prior components.
///
/// Each side keeps a queue of components it has discovered. The sides take
/// turns querying the next unqueried component on their queue (starting
/// with the side of `s`); every revealed cross edge discovers the component
/// at its far end. The search succeeds once a component has been discovered
/// from both sides, returns `NO` when a side has nothing left to query, and
/// stops with `BUDGET_EXHAUSTED` after `budget` calls.
pub fn budgeted_cci_search(
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
    let labels = prior.components();
    let mut augmented = Augmented::default();
    let found = |augmented: &Augmented, session: &OracleSession<'_>| {
        let path = augmented.path(session, s, t).expect("components joined");
        let tags = tag_edges(path.edges(), prior, Provenance::Retrieved);
        SearchOutcome::found(Witness::Path(path), tags, session.counts())
    };
    if labels.same(s, t) {
        return Ok(found(&augmented, session));
    }

    let mut mark = vec![0u8; session.n()];
    let mut queried = vec![false; session.n()];
    mark[labels.label(s).index()] = FROM_S;
    mark[labels.label(t).index()] = FROM_T;
    let mut queues = [
        VecDeque::from([labels.label(s)]),
        VecDeque::from([labels.label(t)]),
    ];
    let bits = [FROM_S, FROM_T];
    let mut side = 0;
    let mut spent = 0;
    loop {
        let next = loop {
            match queues[side].pop_front() {
                Some(c) if queried[c.index()] => continue,
                other => break other,
            }
        };
        let Some(component) = next else {
            return Ok(SearchOutcome::no(session.counts()));
        };
        if spent == budget {
            return Ok(SearchOutcome::exhausted(session.counts()));
        }
        spent += 1;
        queried[component.index()] = true;
        if let CciAnswer::Edges(edges) = session.cci_query(component)? {
            let mut joined = false;
            for e in edges {
                augmented.add(e.lo(), e.hi());
                for end in [e.lo(), e.hi()] {
                    let c = labels.label(end).index();
                    if mark[c] & bits[side] == 0 {
                        mark[c] |= bits[side];
                        queues[side].push_back(VertexId::new(c));
                    }
                    joined |= mark[c] == FROM_S | FROM_T;
                }
            }
            if joined {
                return Ok(found(&augmented, session));
            }
        }
        side ^= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{audit_grounding, is_sound, Status};
    use crate::generators::{gen_er_prior, ErPriorParams, Family, WorldPair};
    use crate::graph::Graph;

    fn v(i: usize) -> VertexId {
        VertexId::new(i)
    }

    #[test]
    fn prior_connected_costs_nothing() {
        let edges = [(0, 1), (1, 2)];
        let w = WorldPair::new(
            Graph::from_edges(3, edges).unwrap(),
            Graph::from_edges(3, edges).unwrap(),
            Family::Custom,
        )
        .unwrap();
        let mut session = OracleSession::new(&w, 0);
        let out = budgeted_cci_search(&mut session, v(0), v(2), 0).unwrap();
        assert_eq!(out.status, Status::Found);
        assert_eq!(out.queries.cci, 0);
    }

    #[test]
    fn star_at_s_takes_one_call() {
        let w = WorldPair::new(
            Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap(),
            Graph::empty(5),
            Family::Custom,
        )
        .unwrap();
        let mut session = OracleSession::new(&w, 0);
        let out = budgeted_cci_search(&mut session, v(0), v(3), 5).unwrap();
        assert_eq!(out.status, Status::Found);
        assert_eq!(out.queries.cci, 1);
    }

    #[test]
    fn disconnected_is_no_and_budget_is_respected() {
        let w = WorldPair::new(
            Graph::from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap(),
            Graph::empty(6),
            Family::Custom,
        )
        .unwrap();
        let mut session = OracleSession::new(&w, 0);
        assert_eq!(
            budgeted_cci_search(&mut session, v(0), v(5), 100).unwrap().status,
            Status::No
        );
        let mut session = OracleSession::new(&w, 0);
        let out = budgeted_cci_search(&mut session, v(0), v(5), 2).unwrap();
        assert_eq!(out.status, Status::BudgetExhausted);
        assert_eq!(out.queries.cci, 2);
    }

    #[test]
    fn sound_and_grounded_on_random_worlds() {
        for seed in 0..30 {
            let w = gen_er_prior(ErPriorParams {
                n: 200,
                p: 0.02,
                eta: 0.2,
                seed,
            })
            .unwrap();
            let mut session = OracleSession::new(&w, seed).with_trace();
            let out = budgeted_cci_search(&mut session, v(0), v(199), 1000).unwrap();
            let connected = w.truth().components().same(v(0), v(199));
            assert_eq!(out.status == Status::Found, connected);
            assert!(is_sound(&out, w.truth(), &[v(0), v(199)]));
            audit_grounding(&out, w.prior(), session.trace().unwrap()).unwrap();
        }
    }
}
