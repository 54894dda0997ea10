//! Bidirectional breadth-first search with a visited-vertex count.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Path, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleBfsResult {
    pub path: Option<Path>,
    /// Distinct vertices discovered by either side.
    pub visited: usize,
}

/// Grows BFS trees from `s` and `t` one layer at a time, always expanding
/// the side with the smaller frontier (ties go to `s`). The search stops the
/// moment one side discovers a vertex the other side has already
/// discovered, and the two tree paths are joined there.
pub fn double_bfs(truth: &Graph, s: VertexId, t: VertexId) -> DoubleBfsResult {
    assert!(s.index() < truth.n() && t.index() < truth.n(), "endpoint out of range");
    if s == t {
        return DoubleBfsResult {
            path: Some(Path::single(s)),
            visited: 1,
        };
    }
    // Parent maps cover only the explored region.
    let mut parent: [HashMap<VertexId, VertexId>; 2] =
        [HashMap::from([(s, s)]), HashMap::from([(t, t)])];
    let mut frontier: [Vec<VertexId>; 2] = [vec![s], vec![t]];
    let visited = |parent: &[HashMap<VertexId, VertexId>; 2]| {
        parent[0].len() + parent[1].keys().filter(|v| !parent[0].contains_key(v)).count()
    };
    while !frontier[0].is_empty() && !frontier[1].is_empty() {
        let side = usize::from(frontier[1].len() < frontier[0].len());
        let layer = std::mem::take(&mut frontier[side]);
        for u in layer {
            for w in truth.neighbors(u) {
                if parent[side].contains_key(&w) {
                    continue;
                }
                parent[side].insert(w, u);
                if parent[side ^ 1].contains_key(&w) {
                    let path = join(&parent, w);
                    return DoubleBfsResult {
                        path: Some(path),
                        visited: visited(&parent),
                    };
                }
                frontier[side].push(w);
            }
        }
    }
    DoubleBfsResult {
        path: None,
        visited: visited(&parent),
    }
}

fn join(parent: &[HashMap<VertexId, VertexId>; 2], meet: VertexId) -> Path {
    let walk = |tree: &HashMap<VertexId, VertexId>| {
        let mut out = vec![meet];
        let mut cur = meet;
        while tree[&cur] != cur {
            cur = tree[&cur];
            out.push(cur);
        }
        out
    };
    let mut vertices = walk(&parent[0]);
    vertices.reverse();
    vertices.extend(walk(&parent[1]).into_iter().skip(1));
    Path::new(vertices)
}
