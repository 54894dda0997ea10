//! Seeded Monte-Carlo sweeps over the algorithms and their persisted
//! output.
//!
//! Trial seeds are `trial_seed(root, experiment, n, trial)` from
//! [`crate::seed`]; trials run in parallel and are merged in `(n, trial)`
//! order, so output does not depend on the worker count.

mod config;
mod plot;
mod record;
mod runner;

use thiserror::Error;

pub use config::{ExperimentConfig, ExperimentKind, ExperimentParams};
pub use plot::{plot_svg, PlotSeries};
pub use record::{
    aggregate_points, fit_points, fit_statistic_for, read_records, summarize, write_records,
    AggregateRow, FitStatistic, SweepResult, TrialRecord, CSV_HEADER,
};
pub use runner::{
    cci_budget, iteration_cap, resolve, run_experiment, Resolved, RunOutput, TrialDetail,
    WORKERS_ENV,
};

use crate::algorithms::AlgorithmError;
use crate::analysis::AnalysisError;
use crate::generators::GenError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid `{field}`: {message}")]
    Config { field: &'static str, message: String },
    #[error(transparent)]
    Generator(#[from] GenError),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
