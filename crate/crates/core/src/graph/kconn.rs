//! Internal K-connectivity: `s` and `t` stay connected in a subgraph after
//! deleting any fewer than `K` of its prior-owned edges.
//!
//! Only edges that also belong to the prior can be deleted; retrieved or
//! verified edges are permanent. Small `K` is decided by enumerating every
//! deletion set, larger `K` by a max-flow computation in which prior edges
//! have unit capacity and all other edges are uncuttable.

use std::collections::{HashMap, VecDeque};

use super::{Edge, Graph, VertexId};

/// Largest `K` decided by exhaustive enumeration in [`internally_k_connected`].
pub const ENUMERATION_MAX_K: usize = 4;

/// Subgraph restricted to the vertices it touches, with local indices.
struct Local {
    s: usize,
    t: usize,
    n: usize,
    edges: Vec<(usize, usize)>,
    removable: Vec<bool>,
}

enum Prepared {
    Trivial(bool),
    Local(Local),
}

fn prepare(subgraph: &[Edge], prior: &Graph, s: VertexId, t: VertexId, k: usize) -> Prepared {
    assert!(k >= 1, "K must be at least 1");
    if s == t {
        return Prepared::Trivial(true);
    }
    let mut edges: Vec<Edge> = subgraph.to_vec();
    edges.sort_unstable();
    edges.dedup();

    let mut index: HashMap<VertexId, usize> = HashMap::new();
    let mut local_edges = Vec::with_capacity(edges.len());
    let mut removable = Vec::with_capacity(edges.len());
    for e in &edges {
        let next = index.len();
        let a = *index.entry(e.lo()).or_insert(next);
        let next = index.len();
        let b = *index.entry(e.hi()).or_insert(next);
        local_edges.push((a, b));
        removable.push(prior.contains_edge(*e));
    }
    match (index.get(&s), index.get(&t)) {
        (Some(&ls), Some(&lt)) => Prepared::Local(Local {
            s: ls,
            t: lt,
            n: index.len(),
            edges: local_edges,
            removable,
        }),
        _ => Prepared::Trivial(false),
    }
}

/// True iff `s` and `t` remain connected in `subgraph` whenever fewer than
/// `k` edges of `subgraph ∩ prior` are removed. `s == t` is connected for
/// every `k`.
///
/// Panics if `k == 0`.
pub fn internally_k_connected(
    subgraph: &[Edge],
    prior: &Graph,
    s: VertexId,
    t: VertexId,
    k: usize,
) -> bool {
    if k <= ENUMERATION_MAX_K {
        k_connected_by_enumeration(subgraph, prior, s, t, k)
    } else {
        k_connected_by_min_cut(subgraph, prior, s, t, k)
    }
}

/// Tries every deletion set of size `< k`. Exponential in `k`.
pub fn k_connected_by_enumeration(
    subgraph: &[Edge],
    prior: &Graph,
    s: VertexId,
    t: VertexId,
    k: usize,
) -> bool {
    let local = match prepare(subgraph, prior, s, t, k) {
        Prepared::Trivial(answer) => return answer,
        Prepared::Local(local) => local,
    };
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); local.n];
    for (i, &(a, b)) in local.edges.iter().enumerate() {
        adjacency[a].push((b, i));
        adjacency[b].push((a, i));
    }
    let candidates: Vec<usize> = (0..local.edges.len())
        .filter(|&i| local.removable[i])
        .collect();

    let mut removed = vec![false; local.edges.len()];
    let connected = |removed: &[bool]| -> bool {
        let mut seen = vec![false; local.n];
        seen[local.s] = true;
        let mut queue = VecDeque::from([local.s]);
        while let Some(u) = queue.pop_front() {
            if u == local.t {
                return true;
            }
            for &(v, ei) in &adjacency[u] {
                if !removed[ei] && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        false
    };

    let m = candidates.len();
    for size in 0..k.min(m + 1) {
        // Lexicographic enumeration of `size`-subsets of `candidates`.
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            for &p in &pick {
                removed[candidates[p]] = true;
            }
            let ok = connected(&removed);
            for &p in &pick {
                removed[candidates[p]] = false;
            }
            if !ok {
                return false;
            }
            let mut advanced = false;
            let mut i = size;
            while i > 0 {
                i -= 1;
                if pick[i] < m - size + i {
                    pick[i] += 1;
                    for j in i + 1..size {
                        pick[j] = pick[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    true
}

/// Decides the predicate by comparing the `s`-`t` min cut over prior edges
/// against `k`.
pub fn k_connected_by_min_cut(
    subgraph: &[Edge],
    prior: &Graph,
    s: VertexId,
    t: VertexId,
    k: usize,
) -> bool {
    let local = match prepare(subgraph, prior, s, t, k) {
        Prepared::Trivial(answer) => return answer,
        Prepared::Local(local) => local,
    };
    let infinite = k as u64 + 1;
    let mut flow = Dinic::new(local.n);
    for (i, &(a, b)) in local.edges.iter().enumerate() {
        let cap = if local.removable[i] { 1 } else { infinite };
        flow.add_undirected(a, b, cap);
    }
    flow.max_flow(local.s, local.t, k as u64) >= k as u64
}

struct Arc {
    to: usize,
    cap: u64,
}

/// Dinic's algorithm on an arc list where arc `i ^ 1` is the reverse of `i`.
struct Dinic {
    graph: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            graph: vec![Vec::new(); n],
            arcs: Vec::new(),
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add_undirected(&mut self, a: usize, b: usize, cap: u64) {
        self.graph[a].push(self.arcs.len());
        self.arcs.push(Arc { to: b, cap });
        self.graph[b].push(self.arcs.len());
        self.arcs.push(Arc { to: a, cap });
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &ai in &self.graph[u] {
                let arc = &self.arcs[ai];
                if arc.cap > 0 && self.level[arc.to] < 0 {
                    self.level[arc.to] = self.level[u] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: u64) -> u64 {
        if u == t {
            return pushed;
        }
        while self.iter[u] < self.graph[u].len() {
            let ai = self.graph[u][self.iter[u]];
            let (to, cap) = (self.arcs[ai].to, self.arcs[ai].cap);
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let d = self.dfs(to, t, pushed.min(cap));
                if d > 0 {
                    self.arcs[ai].cap -= d;
                    self.arcs[ai ^ 1].cap += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    /// Max flow, stopping early once `limit` is reached.
    fn max_flow(&mut self, s: usize, t: usize, limit: u64) -> u64 {
        let mut total = 0;
        while total < limit {
            self.bfs(s);
            if self.level[t] < 0 {
                break;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, limit - total);
                if f == 0 {
                    break;
                }
                total += f;
                if total >= limit {
                    break;
                }
            }
        }
        total
    }
}
