use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{invalid, AnalysisError};
use crate::algorithms::designated_components;
use crate::generators::WorldPair;
use crate::graph::{ComponentLabeling, EdgeColoring, Graph, VertexId};

/// Best single-component coverage of truth neighborhoods.
///
/// For a component `C` of the prior, `gamma(C)` is the minimum over
/// non-isolated truth vertices `u` of `|N(u) ∩ C| / |N(u)|` (1 when the
/// truth has no edges). `gamma_hat` is the largest `gamma(C)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub gamma_hat: f64,
    /// Label (smallest member) of the component achieving `gamma_hat`;
    /// ties go to the smallest label.
    pub witness_component: VertexId,
    /// Smallest vertex achieving the minimum ratio for the witness, or
    /// `None` when the truth has no edges.
    pub argmin_vertex: Option<VertexId>,
    pub per_component_gammas: BTreeMap<VertexId, f64>,
}

/// Admissibility of a world with a reliable prior.
pub fn admissibility_gamma(world: &WorldPair) -> Result<AdmissibilityReport, AnalysisError> {
    if !world.prior_reliable() {
        return Err(AnalysisError::UnreliablePrior);
    }
    Ok(admissibility_of(world.truth(), &world.prior().components()))
}

/// Admissibility of the components in `labels` against `truth`, in
/// `O(n + m)` time.
pub fn admissibility_of(truth: &Graph, labels: &ComponentLabeling) -> AdmissibilityReport {
    let n = truth.n();
    let mut min_ratio = vec![f64::INFINITY; n];
    let mut argmin = vec![None::<VertexId>; n];
    let mut touched_by = vec![0usize; n];
    let mut count = vec![0usize; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut active = 0usize;

    for ui in 0..n {
        let u = VertexId::new(ui);
        let degree = truth.degree(u);
        if degree == 0 {
            continue;
        }
        active += 1;
        for w in truth.neighbors(u) {
            let c = labels.label(w).index();
            if count[c] == 0 {
                touched.push(c);
            }
            count[c] += 1;
        }
        for &c in &touched {
            let ratio = count[c] as f64 / degree as f64;
            if ratio < min_ratio[c] {
                min_ratio[c] = ratio;
                argmin[c] = Some(u);
            }
            touched_by[c] += 1;
            count[c] = 0;
        }
        touched.clear();
    }

    let mut per_component_gammas = BTreeMap::new();
    let mut best: Option<(f64, VertexId)> = None;
    for &label in labels.sizes().keys() {
        let c = label.index();
        let gamma = if active == 0 {
            1.0
        } else if touched_by[c] < active {
            0.0
        } else {
            min_ratio[c]
        };
        per_component_gammas.insert(label, gamma);
        if best.is_none_or(|(g, _)| gamma > g) {
            best = Some((gamma, label));
        }
    }
    let (gamma_hat, witness_component) = best.expect("graph has vertices");

    let w = witness_component.index();
    let argmin_vertex = if active == 0 {
        None
    } else if touched_by[w] < active {
        // Smallest non-isolated vertex with no neighbor in the witness.
        (0..n).map(VertexId::new).find(|&u| {
            truth.degree(u) > 0 && truth.neighbors(u).all(|x| labels.label(x) != witness_component)
        })
    } else {
        argmin[w]
    };
    AdmissibilityReport {
        gamma_hat,
        witness_component,
        argmin_vertex,
        per_component_gammas,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustAdmissibilityReport {
    pub k: usize,
    pub per_color: Vec<AdmissibilityReport>,
    /// Minimum of the per-color `gamma_hat`.
    pub gamma: f64,
}

/// Colors the prior edges into `k` classes exactly as the robust route
/// search does for the same seed and measures each class separately.
pub fn robust_admissibility_check(
    world: &WorldPair,
    k: usize,
    coloring_seed: u64,
) -> Result<RobustAdmissibilityReport, AnalysisError> {
    if k == 0 {
        return Err(invalid("k", "must be at least 1"));
    }
    if !world.prior_reliable() {
        return Err(AnalysisError::UnreliablePrior);
    }
    let coloring = EdgeColoring::random(world.prior(), k, coloring_seed);
    Ok(robust_report(world.truth(), world.prior(), &coloring))
}

pub(crate) fn robust_report(truth: &Graph, prior: &Graph, coloring: &EdgeColoring) -> RobustAdmissibilityReport {
    let per_color: Vec<AdmissibilityReport> = designated_components(prior, coloring)
        .iter()
        .map(|class| admissibility_of(truth, &class.labels))
        .collect();
    let gamma = per_color
        .iter()
        .map(|r| r.gamma_hat)
        .fold(f64::INFINITY, f64::min);
    RobustAdmissibilityReport {
        k: coloring.k(),
        per_color,
        gamma,
    }
}
