use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::oracles::RetrievalMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    BiragAdmissible,
    DoubleStar,
    Birthday,
    CciBudget,
    RobustK,
    Steiner,
    Verify,
    DoubleBfs,
    KBirthday,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 9] = [
        ExperimentKind::BiragAdmissible,
        ExperimentKind::DoubleStar,
        ExperimentKind::Birthday,
        ExperimentKind::CciBudget,
        ExperimentKind::RobustK,
        ExperimentKind::Steiner,
        ExperimentKind::Verify,
        ExperimentKind::DoubleBfs,
        ExperimentKind::KBirthday,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::BiragAdmissible => "birag-admissible",
            ExperimentKind::DoubleStar => "double-star",
            ExperimentKind::Birthday => "birthday",
            ExperimentKind::CciBudget => "cci-budget",
            ExperimentKind::RobustK => "robust-k",
            ExperimentKind::Steiner => "steiner",
            ExperimentKind::Verify => "verify",
            ExperimentKind::DoubleBfs => "double-bfs",
            ExperimentKind::KBirthday => "k-birthday",
        }
    }

    /// Whether the per-trial measurement is `visited` rather than the
    /// total number of oracle queries.
    pub fn measures_visited(self) -> bool {
        matches!(self, ExperimentKind::DoubleBfs | ExperimentKind::KBirthday)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
                ExperimentError::Config {
                    field: "experiment",
                    message: format!("unknown experiment {s:?}; expected one of {}", names.join(", ")),
                }
            })
    }
}

/// Optional overrides of per-experiment defaults. Unset fields take the
/// defaults listed in the README.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentParams {
    /// `C` in the edge probability `p = C ln(n) / n` (`C ln(n)^4 / n` for
    /// double-bfs; multiplied by `k` for robust-k).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_coefficient: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_candidates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terminals: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_coefficient: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<RetrievalMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub n_grid: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// CSV destination; the sweep summary goes next to it with a `.json`
    /// extension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub params: ExperimentParams,
    /// Record wall-clock time per trial. Off by default; when off, repeated
    /// runs produce byte-identical CSV files.
    #[serde(default)]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, n_grid: Vec<usize>, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            experiment,
            n_grid,
            trials,
            seed,
            output: None,
            params: ExperimentParams::default(),
            timing: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let config: ExperimentConfig = serde_json::from_str(text).map_err(|e| ExperimentError::Config {
            field: "config",
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |field: &'static str, message: String| Err(ExperimentError::Config { field, message });
        if self.trials == 0 {
            return bad("trials", "must be at least 1".into());
        }
        if self.n_grid.is_empty() {
            return bad("n_grid", "must not be empty".into());
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("n_grid", "must be strictly increasing".into());
        }
        let min_n = match self.experiment {
            ExperimentKind::DoubleStar => 6,
            ExperimentKind::Steiner => self.params.terminals.unwrap_or(5).max(2),
            ExperimentKind::KBirthday => 1,
            _ => 2,
        };
        if let Some(&n) = self.n_grid.iter().find(|&&n| n < min_n) {
            return bad("n_grid", format!("n = {n} is below the minimum {min_n}"));
        }
        if self.experiment == ExperimentKind::DoubleStar {
            if let Some(&n) = self.n_grid.iter().find(|&&n| n % 2 != 0) {
                return bad("n_grid", format!("double-star needs even n, got {n}"));
            }
        }
        let p = &self.params;
        for (field, value) in [("params.eta", p.eta), ("params.r", p.r)] {
            if let Some(x) = value {
                if !(0.0..=1.0).contains(&x) {
                    return bad(field, format!("{x} is not in [0, 1]"));
                }
            }
        }
        if p.r == Some(0.0) {
            return bad("params.r", "must be positive".into());
        }
        for (field, value) in [("params.p_coefficient", p.p_coefficient), ("params.m_coefficient", p.m_coefficient)] {
            if let Some(x) = value {
                if !(x > 0.0 && x.is_finite()) {
                    return bad(field, format!("{x} must be positive"));
                }
            }
        }
        for (field, value) in [
            ("params.path_length", p.path_length),
            ("params.max_candidates", p.max_candidates),
            ("params.k", p.k),
            ("params.terminals", p.terminals),
            ("params.budget", p.budget),
        ] {
            if value == Some(0) {
                return bad(field, "must be at least 1".into());
            }
        }
        Ok(())
    }
}
