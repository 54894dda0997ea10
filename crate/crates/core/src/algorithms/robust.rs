//! Internally K-connected subgraphs from K single-color prior routes.

use std::collections::{BTreeMap, BTreeSet};

use super::{
    check_vertex, invalid, AlgorithmError, ColoredEdge, Provenance, RobustSubgraph, SearchOutcome,
    Witness,
};
use crate::graph::{ComponentLabeling, Edge, EdgeColoring, Graph, VertexId};
use crate::oracles::{OracleSession, RetrievalAnswer};

/// One color class of the prior with its designated component, the
/// largest component of the class (ties to the smallest label).
pub struct ColorClass {
    pub graph: Graph,
    pub labels: ComponentLabeling,
    pub designated: VertexId,
}

impl ColorClass {
    pub fn contains(&self, v: VertexId) -> bool {
        self.labels.label(v) == self.designated
    }
}

/// Splits `prior` into the color classes of `coloring`.
pub fn designated_components(prior: &Graph, coloring: &EdgeColoring) -> Vec<ColorClass> {
    let mut buckets: Vec<Vec<Edge>> = vec![Vec::new(); coloring.k()];
    for e in prior.edges() {
        if let Some(c) = coloring.color_of(e) {
            buckets[c as usize].push(e);
        }
    }
    buckets
        .into_iter()
        .map(|edges| {
            let graph = Graph::from_edges(prior.n(), edges).expect("prior edges are valid");
            let labels = graph.components();
            let designated = labels.largest().expect("graph has vertices");
            ColorClass {
                graph,
                labels,
                designated,
            }
        })
        .collect()
}

/// Colors the prior edges uniformly into `k` classes (seeded by
/// `coloring_seed`) and joins `s` to `t` once inside every class.
///
/// For each endpoint, retrieval answers are collected until every class's
/// designated component contains the endpoint or one of its answers; a
/// single answer can serve several classes. Answers that are prior edges
/// are discarded. Each class then contributes one BFS route inside its own
/// component. Routes of different colors share no prior edge, and removing
/// fewer than `k` prior edges leaves at least one route intact.
///
/// At most `max_iterations` queries are spent per endpoint.
pub fn robust_k_routes(
    session: &mut OracleSession<'_>,
    s: VertexId,
    t: VertexId,
    k: usize,
    coloring_seed: u64,
    max_iterations: usize,
) -> Result<SearchOutcome, AlgorithmError> {
    check_vertex(session.n(), s)?;
    check_vertex(session.n(), t)?;
    if k == 0 {
        return Err(invalid("k", "must be at least 1"));
    }
    if s == t {
        return Err(invalid("t", "endpoints must differ"));
    }
    if max_iterations == 0 {
        return Err(invalid("max_iterations", "must be positive"));
    }
    let prior = session.prior();
    let coloring = EdgeColoring::random(prior, k, coloring_seed);
    let classes = designated_components(prior, &coloring);

    let mut provenance: BTreeMap<Edge, Provenance> = BTreeMap::new();
    let mut anchors: [Vec<VertexId>; 2] = [Vec::new(), Vec::new()];
    for (side, x) in [s, t].into_iter().enumerate() {
        let mut slot: Vec<Option<VertexId>> = classes
            .iter()
            .map(|class| class.contains(x).then_some(x))
            .collect();
        let mut spent = 0;
        while slot.iter().any(Option::is_none) {
            if spent == max_iterations {
                return Ok(SearchOutcome::exhausted(session.counts()));
            }
            spent += 1;
            let w = match session.retrieve(x)? {
                RetrievalAnswer::Bottom => return Ok(SearchOutcome::no(session.counts())),
                RetrievalAnswer::Neighbor(w) => w,
            };
            if prior.has_edge(x, w) {
                continue;
            }
            let mut used = false;
            for (class, entry) in classes.iter().zip(slot.iter_mut()) {
                if entry.is_none() && class.contains(w) {
                    *entry = Some(w);
                    used = true;
                }
            }
            if used {
                provenance.insert(Edge::new(x, w), Provenance::Retrieved);
            }
        }
        anchors[side] = slot.into_iter().map(|a| a.expect("filled")).collect();
    }

    let mut route_color = Vec::new();
    for (color, class) in classes.iter().enumerate() {
        let segment = class
            .graph
            .bfs_path(anchors[0][color], anchors[1][color])
            .expect("anchors lie in the designated component");
        for e in segment.edges() {
            provenance.insert(e, Provenance::Prior);
            route_color.push(ColoredEdge {
                edge: e,
                color: color as u32,
            });
        }
    }
    route_color.sort_unstable_by_key(|c| c.edge);

    let edges: Vec<Edge> = provenance.keys().copied().collect();
    let mut vertices: BTreeSet<VertexId> = [s, t].into_iter().collect();
    for e in &edges {
        vertices.insert(e.lo());
        vertices.insert(e.hi());
    }
    let robust = RobustSubgraph {
        k,
        edges: edges.clone(),
        route_color,
    };
    let witness = Witness::Subgraph {
        vertices: vertices.into_iter().collect(),
        edges,
    };
    let mut outcome = SearchOutcome::found(witness, provenance, session.counts());
    outcome.robust = Some(robust);
    Ok(outcome)
}
