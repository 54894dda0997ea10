//! Measurements that connect worlds to the behavior of the algorithms.

mod admissibility;
mod birthday;
mod fit;
mod fixed_point;

use thiserror::Error;

pub use admissibility::{
    admissibility_gamma, admissibility_of, robust_admissibility_check, AdmissibilityReport,
    RobustAdmissibilityReport,
};
pub use birthday::{k_birthday_counts, k_birthday_sim};
pub use fit::{fit_scaling, ScalingFit};
pub use fixed_point::gamma_fixed_point;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("the prior contains edges missing from the truth")]
    UnreliablePrior,
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> AnalysisError {
    AnalysisError::InvalidArgument {
        name,
        reason: reason.into(),
    }
}

/// Chance that scanning `q` of the `n/2 - 1` non-center leaves on one side
/// of a double star hits the bridge endpoint: `q / (n/2 - 1)`.
pub fn double_star_success_curve(n: usize, q: usize) -> Result<f64, AnalysisError> {
    if n < 6 || !n.is_multiple_of(2) {
        return Err(invalid("n", format!("{n} must be even and at least 6")));
    }
    let leaves = n / 2 - 1;
    if q > leaves {
        return Err(invalid("q", format!("{q} exceeds the {leaves} leaves of one star")));
    }
    Ok(q as f64 / leaves as f64)
}
