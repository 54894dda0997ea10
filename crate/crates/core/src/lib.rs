//! Simulation of grounded graph search under retrieval-style oracles.
//!
//! * [`graph`]: simple undirected graphs and the internal K-connectivity
//!   predicate.
//! * [`generators`]: world pairs (truth graph plus prior graph).
//! * [`oracles`]: query-counting sessions over a world.
//! * [`algorithms`]: grounded search procedures returning a [`SearchOutcome`].
//! * [`analysis`]: admissibility measures and scaling fits.
//! * [`experiments`]: seeded Monte-Carlo sweeps with CSV and SVG output.

pub mod algorithms;
pub mod analysis;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod oracles;
pub mod seed;

pub use generators::WorldPair;
pub use graph::{Edge, Graph, Path, VertexId};
pub use oracles::{OracleSession, QueryCounts, RetrievalMode};
