//! Per-run records and their CSV form.

use std::io::Write;
use std::time::Duration;

use super::config::{Scheme, SweepVariable};
use crate::Result;

/// Version of the column layout written to `records.csv` and friends.
pub const CSV_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Ok,
    /// The solver returned a point that failed the feasibility check.
    Infeasible,
    Failed(String),
}

impl RunStatus {
    pub fn label(&self) -> String {
        match self {
            RunStatus::Ok => "ok".into(),
            RunStatus::Infeasible => "infeasible".into(),
            RunStatus::Failed(m) => format!("failed: {m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub sweep_variable: SweepVariable,
    pub sweep_value: f64,
    pub scheme: Scheme,
    pub amax_db: f64,
    pub realization: u64,
    pub seed: u64,
    pub status: RunStatus,
    /// Weighted sum throughput in bits/Hz; `None` unless `status` is `Ok`.
    pub objective: Option<f64>,
    pub total_energy: Option<f64>,
    pub hap_energy: Option<f64>,
    pub amplifier_energy: Option<f64>,
    pub tau0: Option<f64>,
    pub iterations: usize,
    /// Kept out of the CSV files so they stay byte-reproducible.
    pub wall_time: Duration,
}

/// Twelve significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

pub const RECORD_HEADER: [&str; 12] = [
    "sweep_variable",
    "sweep_value",
    "scheme",
    "a_max_db",
    "realization",
    "seed",
    "status",
    "feasible",
    "objective_bits_per_hz",
    "total_energy_j",
    "tau0_s",
    "iterations",
];

pub fn write_records<W: Write>(out: W, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_HEADER)?;
    for r in records {
        w.write_record([
            r.sweep_variable.name().to_string(),
            fmt_float(r.sweep_value),
            r.scheme.name().to_string(),
            fmt_float(r.amax_db),
            r.realization.to_string(),
            r.seed.to_string(),
            r.status.label(),
            (r.status == RunStatus::Ok).to_string(),
            fmt_opt(r.objective),
            fmt_opt(r.total_energy),
            fmt_opt(r.tau0),
            r.iterations.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub const ENERGY_HEADER: [&str; 9] = [
    "sweep_variable",
    "sweep_value",
    "scheme",
    "a_max_db",
    "realization",
    "mode",
    "total_energy_j",
    "hap_energy_j",
    "amplifier_energy_j",
];

/// Energy breakdown of every successful run.
pub fn write_energy<W: Write>(out: W, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ENERGY_HEADER)?;
    for r in records.iter().filter(|r| r.status == RunStatus::Ok) {
        w.write_record([
            r.sweep_variable.name().to_string(),
            fmt_float(r.sweep_value),
            r.scheme.name().to_string(),
            fmt_float(r.amax_db),
            r.realization.to_string(),
            if r.scheme.is_passive() { "passive" } else { "active" }.to_string(),
            fmt_opt(r.total_energy),
            fmt_opt(r.hap_energy),
            fmt_opt(r.amplifier_energy),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_float(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(fmt_float(2.0), "2.00000000000e0");
    }
}
