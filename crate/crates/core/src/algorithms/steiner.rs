//! Connecting several terminals through one prior component.

use std::collections::{BTreeMap, VecDeque};

use super::{check_vertex, invalid, AlgorithmError, Provenance, SearchOutcome, Witness};
use crate::graph::{Edge, Graph, VertexId};
use crate::oracles::{OracleSession, RetrievalAnswer};

/// Builds a tree spanning `terminals`.
///
/// If the prior already places every terminal in one component the tree is
/// stitched there without queries. Otherwise the hub is the largest prior
/// component: each terminal outside it is queried until an answer lands in
/// the hub (at most `max_iterations` times), and the landing points are
/// joined inside the hub by prior BFS, each one routed to the nearest vertex
/// already in the tree.
pub fn steiner_connect(
    session: &mut OracleSession<'_>,
    terminals: &[VertexId],
    max_iterations: usize,
) -> Result<SearchOutcome, AlgorithmError> {
    if terminals.is_empty() {
        return Err(invalid("terminals", "need at least one terminal"));
    }
    for &x in terminals {
        check_vertex(session.n(), x)?;
    }
    let mut sorted = terminals.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("terminals", "terminals must be distinct"));
    }
    if max_iterations == 0 {
        return Err(invalid("max_iterations", "must be positive"));
    }

    let prior = session.prior();
    let labels = prior.components();
    let first = labels.label(terminals[0]);
    let hub = if terminals.iter().all(|&x| labels.label(x) == first) {
        first
    } else {
        labels.largest().expect("graph has vertices")
    };

    let mut anchors = Vec::with_capacity(terminals.len());
    let mut connectors = Vec::new();
    for &x in terminals {
        if labels.label(x) == hub {
            anchors.push(x);
            continue;
        }
        let mut landed = None;
        for _ in 0..max_iterations {
            match session.retrieve(x)? {
                RetrievalAnswer::Bottom => return Ok(SearchOutcome::no(session.counts())),
                RetrievalAnswer::Neighbor(w) if labels.label(w) == hub => {
                    landed = Some(w);
                    break;
                }
                RetrievalAnswer::Neighbor(_) => {}
            }
        }
        match landed {
            Some(w) => {
                anchors.push(w);
                connectors.push(Edge::new(x, w));
            }
            None => return Ok(SearchOutcome::exhausted(session.counts())),
        }
    }

    let mut in_tree = vec![false; session.n()];
    in_tree[anchors[0].index()] = true;
    let mut provenance: BTreeMap<Edge, Provenance> = BTreeMap::new();
    for &a in &anchors[1..] {
        if in_tree[a.index()] {
            continue;
        }
        let route = route_to_tree(prior, a, &in_tree).expect("anchors share a prior component");
        for pair in route.windows(2) {
            provenance.insert(Edge::new(pair[0], pair[1]), Provenance::Prior);
        }
        for v in route {
            in_tree[v.index()] = true;
        }
    }
    for e in connectors {
        in_tree[e.lo().index()] = true;
        in_tree[e.hi().index()] = true;
        provenance.insert(e, Provenance::Retrieved);
    }
    let vertices: Vec<VertexId> = (0..session.n())
        .filter(|&i| in_tree[i])
        .map(VertexId::new)
        .collect();
    let witness = Witness::Subgraph {
        vertices,
        edges: provenance.keys().copied().collect(),
    };
    Ok(SearchOutcome::found(witness, provenance, session.counts()))
}

/// Shortest prior path from `start` to the nearest vertex with `in_tree`
/// set, listed from `start`.
fn route_to_tree(prior: &Graph, start: VertexId, in_tree: &[bool]) -> Option<Vec<VertexId>> {
    let mut parent: Vec<Option<VertexId>> = vec![None; prior.n()];
    parent[start.index()] = Some(start);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        if in_tree[u.index()] {
            let mut route = vec![u];
            let mut cur = u;
            while cur != start {
                cur = parent[cur.index()].expect("visited");
                route.push(cur);
            }
            route.reverse();
            return Some(route);
        }
        for w in prior.neighbors(u) {
            if parent[w.index()].is_none() {
                parent[w.index()] = Some(u);
                queue.push_back(w);
            }
        }
    }
    None
}
