use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Edge, Graph};

/// Uniform random K-coloring of a graph's edges, i.e. a K-way edge partition.
#[derive(Debug, Clone)]
pub struct EdgeColoring {
    k: usize,
    colors: HashMap<Edge, u32>,
}

impl EdgeColoring {
    /// Colors every edge of `g` independently and uniformly from `[0, k)`.
    /// Edges are visited in ascending order; the result depends only on
    /// `(g, k, seed)`.
    pub fn random(g: &Graph, k: usize, seed: u64) -> Self {
        assert!(k >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let colors = g
            .edges()
            .map(|e| (e, rng.random_range(0..k as u32)))
            .collect();
        EdgeColoring { k, colors }
    }

    pub fn from_map(k: usize, colors: HashMap<Edge, u32>) -> Self {
        assert!(colors.values().all(|&c| (c as usize) < k));
        EdgeColoring { k, colors }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn color_of(&self, e: Edge) -> Option<u32> {
        self.colors.get(&e).copied()
    }

    /// The spanning subgraph of `g` made of one color class.
    pub fn class_graph(&self, g: &Graph, color: u32) -> Graph {
        g.filter_edges(|e| self.colors.get(&e) == Some(&color))
    }
}
