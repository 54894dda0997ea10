//! Deterministic worlds shared by the benchmarks.

use ragsim_core::generators::{gen_double_star, gen_er_prior, DoubleStarParams, ErPriorParams};
use ragsim_core::{VertexId, WorldPair};

/// Seed used by every fixture.
pub const SEED: u64 = 0x5eed;

/// Admissible ER world: `p = c ln(n) / n`, prior keeps each edge with
/// probability `eta`.
pub fn er_world(n: usize, c: f64, eta: f64) -> WorldPair {
    let p = (c * (n as f64).ln() / n as f64).min(1.0);
    gen_er_prior(ErPriorParams { n, p, eta, seed: SEED }).expect("valid parameters")
}

pub fn double_star(n: usize) -> WorldPair {
    gen_double_star(DoubleStarParams { n, seed: SEED }).expect("valid parameters")
}

/// A fixed pair of distinct endpoints for `n >= 2`.
pub fn endpoints(n: usize) -> (VertexId, VertexId) {
    (VertexId::new(0), VertexId::new(n / 2 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        assert_eq!(er_world(200, 5.0, 0.5).truth(), er_world(200, 5.0, 0.5).truth());
        assert_eq!(double_star(10).n(), 10);
        let (s, t) = endpoints(10);
        assert_ne!(s, t);
    }
}
