//! Grounded search procedures.
//!
//! Every procedure except [`double_bfs`] talks to the world only through an
//! [`OracleSession`](crate::oracles::OracleSession) and returns a
//! [`SearchOutcome`] whose edges are tagged with where they were observed.

mod birag;
mod cci;
mod double_bfs;
mod outcome;
mod probe;
mod robust;
mod steiner;
mod verify;

use thiserror::Error;

use crate::oracles::OracleError;

pub use birag::birag;
pub use cci::budgeted_cci_search;
pub use double_bfs::{double_bfs, DoubleBfsResult};
pub use outcome::{
    audit_grounding, is_sound, ColoredEdge, GroundingViolation, Provenance, RobustSubgraph,
    SearchOutcome, Status, TaggedEdge, Witness,
};
pub use probe::{grounded_bidirectional_probe, prior_component_scan};
pub use robust::{designated_components, robust_k_routes};
pub use steiner::steiner_connect;
pub use verify::generate_then_verify;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgorithmError {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> AlgorithmError {
    AlgorithmError::InvalidArgument {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn check_vertex(n: usize, vertex: crate::graph::VertexId) -> Result<(), AlgorithmError> {
    if vertex.index() < n {
        Ok(())
    } else {
        Err(OracleError::VertexOutOfRange { vertex, n }.into())
    }
}
