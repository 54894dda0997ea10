use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, ExperimentError, ExperimentKind};
use crate::algorithms::Status;
use crate::analysis::{fit_scaling, ScalingFit};

/// Column order of the trial CSV.
pub const CSV_HEADER: &str = "experiment,n,trial,seed,status,retrieval_q,cci_q,verify_q,visited,wall_ms";

/// One trial. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub experiment: ExperimentKind,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub status: Status,
    pub retrieval_q: u64,
    pub cci_q: u64,
    pub verify_q: u64,
    pub visited: Option<usize>,
    pub wall_ms: f64,
}

impl TrialRecord {
    /// The per-trial measurement aggregated in a sweep: `visited` for
    /// double-bfs and k-birthday, total oracle queries otherwise.
    pub fn metric(&self) -> f64 {
        if self.experiment.measures_visited() {
            self.visited.unwrap_or(0) as f64
        } else {
            (self.retrieval_q + self.cci_q + self.verify_q) as f64
        }
    }

    /// Whether the trial contributes to the metric statistics: every trial
    /// for k-birthday, FOUND trials otherwise.
    pub fn counts_toward_metric(&self) -> bool {
        self.experiment == ExperimentKind::KBirthday || self.status == Status::Found
    }
}

pub fn write_records<W: Write>(records: &[TrialRecord], out: W) -> Result<(), ExperimentError> {
    let mut writer = csv::Writer::from_writer(out);
    if records.is_empty() {
        writer.write_record(CSV_HEADER.split(','))?;
    }
    for record in records {
        writer.serialize(record)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<TrialRecord>, ExperimentError> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        return Err(ExperimentError::Config {
            field: "csv",
            message: format!("unexpected header {:?}", header.join(",")),
        });
    }
    reader
        .deserialize()
        .map(|row| row.map_err(ExperimentError::from))
        .collect()
}

/// Statistics of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub n: usize,
    pub trials: usize,
    pub found: usize,
    pub success_rate: f64,
    /// Number of trials the metric statistics are taken over.
    pub samples: usize,
    pub mean: Option<f64>,
    pub median: Option<f64>,
    pub q90: Option<f64>,
    /// Standard error of `mean`.
    pub sem: Option<f64>,
}

/// Which column of the aggregate table the scaling fit uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitStatistic {
    Mean,
    Q90,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: ExperimentConfig,
    /// `queries` or `visited`.
    pub metric: String,
    pub points: Vec<AggregateRow>,
    pub fit_statistic: FitStatistic,
    /// Log-log fit over grid points with a positive statistic; absent with
    /// fewer than three such points.
    pub fit: Option<ScalingFit>,
}

pub fn fit_statistic_for(kind: ExperimentKind) -> FitStatistic {
    if kind == ExperimentKind::DoubleBfs {
        FitStatistic::Q90
    } else {
        FitStatistic::Mean
    }
}

/// Nearest-rank quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

fn median(sorted: &[f64]) -> f64 {
    let k = sorted.len();
    if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    }
}

/// Aggregates records (already in `(n, trial)` order) per grid point.
pub fn aggregate_points(records: &[TrialRecord]) -> Vec<AggregateRow> {
    let mut rows = Vec::new();
    for group in records.chunk_by(|a, b| a.n == b.n) {
        let found = group.iter().filter(|r| r.status == Status::Found).count();
        let mut values: Vec<f64> = group
            .iter()
            .filter(|r| r.counts_toward_metric())
            .map(TrialRecord::metric)
            .collect();
        values.sort_by(f64::total_cmp);
        let k = values.len();
        let (mean, median, q90, sem) = if k == 0 {
            (None, None, None, None)
        } else {
            let mean = values.iter().sum::<f64>() / k as f64;
            let sem = if k > 1 {
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
                Some((var / k as f64).sqrt())
            } else {
                None
            };
            (Some(mean), Some(median(&values)), Some(quantile(&values, 0.9)), sem)
        };
        rows.push(AggregateRow {
            n: group[0].n,
            trials: group.len(),
            found,
            success_rate: found as f64 / group.len() as f64,
            samples: k,
            mean,
            median,
            q90,
            sem,
        });
    }
    rows
}

pub fn fit_points(points: &[AggregateRow], statistic: FitStatistic) -> Option<ScalingFit> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|row| {
            let y = match statistic {
                FitStatistic::Mean => row.mean,
                FitStatistic::Q90 => row.q90,
            }?;
            (y > 0.0).then_some((row.n as f64, y))
        })
        .collect();
    fit_scaling(&xy).ok()
}

/// Builds the sweep summary from records; used both after a run and when
/// recomputing from a CSV file.
pub fn summarize(config: &ExperimentConfig, records: &[TrialRecord]) -> SweepResult {
    let points = aggregate_points(records);
    let fit_statistic = fit_statistic_for(config.experiment);
    let fit = fit_points(&points, fit_statistic);
    SweepResult {
        config: config.clone(),
        metric: if config.experiment.measures_visited() {
            "visited".into()
        } else {
            "queries".into()
        },
        points,
        fit_statistic,
        fit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(n: usize, trial: usize, status: Status, q: u64) -> TrialRecord {
        TrialRecord {
            experiment: ExperimentKind::Birthday,
            n,
            trial,
            seed: 99,
            status,
            retrieval_q: q,
            cci_q: 0,
            verify_q: 0,
            visited: None,
            wall_ms: 0.0,
        }
    }

    #[test]
    fn csv_roundtrip_and_header() {
        let records = vec![record(8, 0, Status::Found, 3), record(8, 1, Status::BudgetExhausted, 80)];
        let mut buf = Vec::new();
        write_records(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(text.lines().nth(1).unwrap(), "birthday,8,0,99,FOUND,3,0,0,,0.0");
        assert_eq!(read_records(&buf[..]).unwrap(), records);
    }

    #[test]
    fn aggregates_use_found_trials() {
        let records: Vec<TrialRecord> = (0..10)
            .map(|i| record(16, i, if i < 9 { Status::Found } else { Status::No }, i as u64 + 1))
            .collect();
        let rows = aggregate_points(&records);
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!(row.found, 9);
        assert_eq!(row.samples, 9);
        assert_eq!(row.mean, Some(5.0));
        assert_eq!(row.median, Some(5.0));
        assert_eq!(row.q90, Some(9.0));
        assert!((row.success_rate - 0.9).abs() < 1e-12);
    }

    #[test]
    fn quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(median(&v), 2.5);
        assert_eq!(quantile(&v, 0.9), 4.0);
        assert_eq!(quantile(&v, 0.5), 2.0);
        assert_eq!(quantile(&[7.0], 0.9), 7.0);
    }
}
