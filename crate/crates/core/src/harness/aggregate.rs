//! Means and standard errors per `(sweep value, scheme, a_max)`.

use std::io::Write;

use super::config::{Scheme, SweepVariable};
use super::records::{fmt_float, RunRecord, RunStatus};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub sweep_variable: SweepVariable,
    pub sweep_value: f64,
    pub scheme: Scheme,
    pub amax_db: f64,
    /// Successful runs averaged.
    pub count: usize,
    pub failures: usize,
    pub objective_mean: f64,
    pub objective_stderr: f64,
    pub energy_mean: f64,
    pub energy_stderr: f64,
}

/// Sample mean and standard error (`n - 1` normalization; zero for `n = 1`).
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn key(r: &RunRecord) -> (u64, Scheme, u64) {
    (r.sweep_value.to_bits(), r.scheme, r.amax_db.to_bits())
}

/// Groups are emitted sorted by sweep value, scheme and cap regardless of
/// input order; groups without a successful run are dropped with a warning.
pub fn aggregate(records: &[RunRecord]) -> Vec<AggregateRow> {
    let mut sorted: Vec<&RunRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        a.sweep_value
            .total_cmp(&b.sweep_value)
            .then(a.scheme.cmp(&b.scheme))
            .then(a.amax_db.total_cmp(&b.amax_db))
            .then(a.realization.cmp(&b.realization))
    });
    let mut rows = Vec::new();
    let mut start = 0;
    while start < sorted.len() {
        let k = key(sorted[start]);
        let mut end = start;
        while end < sorted.len() && key(sorted[end]) == k {
            end += 1;
        }
        let group = &sorted[start..end];
        let ok: Vec<&&RunRecord> = group.iter().filter(|r| r.status == RunStatus::Ok).collect();
        let first = group[0];
        if ok.is_empty() {
            eprintln!(
                "warning: no successful runs for {}={} scheme={} a_max_db={}; group omitted",
                first.sweep_variable.name(),
                first.sweep_value,
                first.scheme.name(),
                first.amax_db
            );
        } else {
            let objective: Vec<f64> = ok.iter().filter_map(|r| r.objective).collect();
            let energy: Vec<f64> = ok.iter().filter_map(|r| r.total_energy).collect();
            let (objective_mean, objective_stderr) = mean_stderr(&objective);
            let (energy_mean, energy_stderr) = mean_stderr(&energy);
            rows.push(AggregateRow {
                sweep_variable: first.sweep_variable,
                sweep_value: first.sweep_value,
                scheme: first.scheme,
                amax_db: first.amax_db,
                count: ok.len(),
                failures: group.len() - ok.len(),
                objective_mean,
                objective_stderr,
                energy_mean,
                energy_stderr,
            });
        }
        start = end;
    }
    rows
}

pub const AGGREGATE_HEADER: [&str; 10] = [
    "sweep_variable",
    "sweep_value",
    "scheme",
    "a_max_db",
    "count",
    "failures",
    "objective_mean",
    "objective_stderr",
    "energy_mean_j",
    "energy_stderr_j",
];

pub fn write_aggregate<W: Write>(out: W, rows: &[AggregateRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(AGGREGATE_HEADER)?;
    for r in rows {
        w.write_record([
            r.sweep_variable.name().to_string(),
            fmt_float(r.sweep_value),
            r.scheme.name().to_string(),
            fmt_float(r.amax_db),
            r.count.to_string(),
            r.failures.to_string(),
            fmt_float(r.objective_mean),
            fmt_float(r.objective_stderr),
            fmt_float(r.energy_mean),
            fmt_float(r.energy_stderr),
        ])?;
    }
    w.flush()?;
    Ok(())
}
