//! Undirected simple graphs and their connected components.
//!
//! A [`Graph`] is either backed by sorted adjacency lists or, for the
//! complete graph, stored implicitly with no lists at all. Both forms answer
//! [`Graph::neighbor_at`] in O(1).

mod coloring;
mod io;
mod kconn;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use coloring::EdgeColoring;
pub use io::{read_edge_list, write_edge_list};
pub use kconn::{
    internally_k_connected, k_connected_by_enumeration, k_connected_by_min_cut,
    ENUMERATION_MAX_K,
};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("header announced {expected} edges but {found} were read")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Index of a vertex in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn new(index: usize) -> Self {
        debug_assert!(index <= u32::MAX as usize);
        VertexId(index as u32)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VertexId {
    fn from(i: usize) -> Self {
        VertexId::new(i)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An unordered vertex pair, stored with the smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    #[inline]
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    #[inline]
    pub fn from_indices(a: usize, b: usize) -> Self {
        Edge::new(VertexId::new(a), VertexId::new(b))
    }

    #[inline]
    pub fn lo(self) -> VertexId {
        self.0
    }

    #[inline]
    pub fn hi(self) -> VertexId {
        self.1
    }

    #[inline]
    pub fn contains(self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint that is not `v`. `v` must be an endpoint.
    #[inline]
    pub fn other(self, v: VertexId) -> VertexId {
        debug_assert!(self.contains(v));
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

impl From<(usize, usize)> for Edge {
    fn from((a, b): (usize, usize)) -> Self {
        Edge::from_indices(a, b)
    }
}

impl From<(VertexId, VertexId)> for Edge {
    fn from((a, b): (VertexId, VertexId)) -> Self {
        Edge::new(a, b)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Storage {
    Lists(Vec<Vec<VertexId>>),
    Complete,
}

/// Undirected simple graph on `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    storage: Storage,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from unordered pairs. Duplicate pairs collapse to a
    /// single edge; self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I, E>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut lists: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for e in edges {
            let e: Edge = e.into();
            let (a, b) = (e.lo().index(), e.hi().index());
            if b >= n {
                return Err(GraphError::VertexOutOfRange { vertex: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop { vertex: a });
            }
            lists[a].push(e.hi());
            lists[b].push(e.lo());
        }
        let mut total = 0;
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
            total += list.len();
        }
        Ok(Graph {
            n,
            storage: Storage::Lists(lists),
            edge_count: total / 2,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            storage: Storage::Lists(vec![Vec::new(); n]),
            edge_count: 0,
        }
    }

    /// `K_n`, stored implicitly.
    pub fn complete(n: usize) -> Self {
        Graph {
            n,
            storage: Storage::Complete,
            edge_count: n * n.saturating_sub(1) / 2,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.index() < self.n
    }

    #[inline]
    pub fn degree(&self, u: VertexId) -> usize {
        match &self.storage {
            Storage::Lists(lists) => lists[u.index()].len(),
            Storage::Complete => self.n - 1,
        }
    }

    /// The `i`-th neighbor of `u` in ascending order.
    #[inline]
    pub fn neighbor_at(&self, u: VertexId, i: usize) -> VertexId {
        match &self.storage {
            Storage::Lists(lists) => lists[u.index()][i],
            Storage::Complete => {
                debug_assert!(i < self.n - 1);
                if i < u.index() {
                    VertexId::new(i)
                } else {
                    VertexId::new(i + 1)
                }
            }
        }
    }

    pub fn neighbors(&self, u: VertexId) -> Neighbors<'_> {
        match &self.storage {
            Storage::Lists(lists) => Neighbors::Slice(lists[u.index()].iter()),
            Storage::Complete => Neighbors::AllBut {
                next: 0,
                end: self.n as u32,
                skip: u.0,
            },
        }
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        if u == v || !self.contains_vertex(u) || !self.contains_vertex(v) {
            return false;
        }
        match &self.storage {
            Storage::Lists(lists) => {
                let (a, b) = if lists[u.index()].len() <= lists[v.index()].len() {
                    (u, v)
                } else {
                    (v, u)
                };
                lists[a.index()].binary_search(&b).is_ok()
            }
            Storage::Complete => true,
        }
    }

    #[inline]
    pub fn contains_edge(&self, e: Edge) -> bool {
        self.has_edge(e.lo(), e.hi())
    }

    /// All edges in ascending `(lo, hi)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |u| {
            let u = VertexId::new(u);
            self.neighbors(u).filter(move |&v| v > u).map(move |v| Edge::new(u, v))
        })
    }

    /// Subgraph on the same vertex set keeping edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(Edge) -> bool) -> Graph {
        let mut lists: Vec<Vec<VertexId>> = vec![Vec::new(); self.n];
        let mut count = 0;
        for e in self.edges() {
            if keep(e) {
                lists[e.lo().index()].push(e.hi());
                lists[e.hi().index()].push(e.lo());
                count += 1;
            }
        }
        for list in &mut lists {
            list.sort_unstable();
        }
        Graph {
            n: self.n,
            storage: Storage::Lists(lists),
            edge_count: count,
        }
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges().all(|e| other.contains_edge(e))
    }

    pub fn components(&self) -> ComponentLabeling {
        connected_components(self)
    }

    pub fn bfs_path(&self, s: VertexId, t: VertexId) -> Option<Path> {
        bfs_path(self, s, t)
    }
}

/// Neighbor iterator for both storage forms.
#[derive(Debug, Clone)]
pub enum Neighbors<'a> {
    Slice(std::slice::Iter<'a, VertexId>),
    AllBut { next: u32, end: u32, skip: u32 },
}

impl Iterator for Neighbors<'_> {
    type Item = VertexId;

    #[inline]
    fn next(&mut self) -> Option<VertexId> {
        match self {
            Neighbors::Slice(it) => it.next().copied(),
            Neighbors::AllBut { next, end, skip } => {
                if *next == *skip {
                    *next += 1;
                }
                if *next >= *end {
                    return None;
                }
                let v = VertexId(*next);
                *next += 1;
                Some(v)
            }
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let len = match self {
            Neighbors::Slice(it) => it.len(),
            Neighbors::AllBut { next, end, skip } => {
                let remaining = end.saturating_sub(*next) as usize;
                if *skip >= *next && *skip < *end {
                    remaining - 1
                } else {
                    remaining
                }
            }
        };
        (len, Some(len))
    }
}

impl ExactSizeIterator for Neighbors<'_> {}

/// A simple path given by its vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(Vec<VertexId>);

impl Path {
    pub fn new(vertices: Vec<VertexId>) -> Self {
        Path(vertices)
    }

    pub fn single(v: VertexId) -> Self {
        Path(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<VertexId> {
        self.0
    }

    pub fn source(&self) -> Option<VertexId> {
        self.0.first().copied()
    }

    pub fn target(&self) -> Option<VertexId> {
        self.0.last().copied()
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.0.windows(2).map(|w| Edge::new(w[0], w[1]))
    }

    pub fn is_simple(&self) -> bool {
        let mut seen: Vec<VertexId> = self.0.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// Simple, nonempty, and every consecutive pair is an edge of `g`.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        !self.0.is_empty()
            && self.0.iter().all(|&v| g.contains_vertex(v))
            && self.is_simple()
            && self.edges().all(|e| g.contains_edge(e))
    }
}

/// Connected-component labels; each component is named by its smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    label: Vec<VertexId>,
    sizes: BTreeMap<VertexId, usize>,
}

impl ComponentLabeling {
    #[inline]
    pub fn label(&self, v: VertexId) -> VertexId {
        self.label[v.index()]
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.label
    }

    #[inline]
    pub fn same(&self, u: VertexId, v: VertexId) -> bool {
        self.label[u.index()] == self.label[v.index()]
    }

    pub fn size_of(&self, component: VertexId) -> usize {
        self.sizes.get(&component).copied().unwrap_or(0)
    }

    pub fn sizes(&self) -> &BTreeMap<VertexId, usize> {
        &self.sizes
    }

    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }

    /// Largest component; ties go to the smallest label.
    pub fn largest(&self) -> Option<VertexId> {
        self.sizes
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(&c, _)| c)
    }

    /// Vertices grouped by component label, each group ascending.
    pub fn members(&self) -> BTreeMap<VertexId, Vec<VertexId>> {
        let mut groups: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for (i, &c) in self.label.iter().enumerate() {
            groups.entry(c).or_default().push(VertexId::new(i));
        }
        groups
    }
}

pub fn connected_components(g: &Graph) -> ComponentLabeling {
    let n = g.n();
    const UNSET: VertexId = VertexId(u32::MAX);
    let mut label = vec![UNSET; n];
    let mut sizes = BTreeMap::new();
    let mut queue = VecDeque::new();
    for root in 0..n {
        if label[root] != UNSET {
            continue;
        }
        let c = VertexId::new(root);
        label[root] = c;
        queue.push_back(c);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for v in g.neighbors(u) {
                if label[v.index()] == UNSET {
                    label[v.index()] = c;
                    queue.push_back(v);
                }
            }
        }
        sizes.insert(c, size);
    }
    ComponentLabeling { label, sizes }
}

/// Shortest `s`-`t` path in `g`, or `None` when they are disconnected.
pub fn bfs_path(g: &Graph, s: VertexId, t: VertexId) -> Option<Path> {
    bfs_path_by(g.n(), s, t, |u| g.neighbors(u))
}

/// Breadth-first search over an arbitrary neighbor function on `[0, n)`.
/// Neighbors are explored in the order the function yields them.
pub fn bfs_path_by<F, I>(n: usize, s: VertexId, t: VertexId, mut neighbors: F) -> Option<Path>
where
    F: FnMut(VertexId) -> I,
    I: IntoIterator<Item = VertexId>,
{
    if s == t {
        return Some(Path::single(s));
    }
    const UNSEEN: u32 = u32::MAX;
    let mut parent = vec![UNSEEN; n];
    parent[s.index()] = s.0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for v in neighbors(u) {
            if parent[v.index()] != UNSEEN {
                continue;
            }
            parent[v.index()] = u.0;
            if v == t {
                let mut out = vec![t];
                let mut cur = t;
                while cur != s {
                    cur = VertexId(parent[cur.index()]);
                    out.push(cur);
                }
                out.reverse();
                return Some(Path(out));
            }
            queue.push_back(v);
        }
    }
    None
}
