//! Monte Carlo sweep engine.

use std::path::Path;
use std::time::{Duration, Instant};

use rand::RngCore;
use rayon::prelude::*;

use super::aggregate::{aggregate, write_aggregate, AggregateRow};
use super::config::{ExperimentConfig, Scheme};
use super::records::{write_energy, write_records, RunRecord, RunStatus};
use crate::ao::{passive_params, solve_passive_baseline, solve_st, solve_ue, solve_ul, PassiveSetup, Solution, SolverConfig};
use crate::channel::{generate, DerivedChannel, LinkStream, RealizationSeed};
use crate::model::{total_energy_consumption, SystemParams};
use crate::{Error, Result};

/// Share of failed runs at one point above which a sweep is reported as
/// failed.
pub const FAILURE_THRESHOLD: f64 = 0.5;

/// Runs `scheme` on one instance. Passive schemes ignore the amplitude cap,
/// amplifier noise and budget of `params`.
pub fn solve_scheme(scheme: Scheme, params: &SystemParams, derived: &DerivedChannel, config: &SolverConfig) -> Result<Solution> {
    match scheme {
        Scheme::UeActive => solve_ue(params, derived, config),
        Scheme::UlActive => solve_ul(params, derived, config),
        Scheme::StaticActive => solve_st(params, derived, config),
        Scheme::UePassive => solve_passive_baseline(params, derived, config, PassiveSetup::UserAdaptive),
        Scheme::StaticPassive => solve_passive_baseline(params, derived, config, PassiveSetup::Static),
    }
}

/// Everything one run needs: parameters, channel and solver settings.
pub struct Instance {
    pub params: SystemParams,
    pub derived: DerivedChannel,
    pub solver: SolverConfig,
}

/// Builds realization `realization` at one sweep point. The fading draws and
/// device offsets depend only on `(seed, realization)`, so every sweep point
/// sees the same small-scale fading.
pub fn build_instance(config: &ExperimentConfig, sweep_value: f64, amax_db: f64, realization: u64) -> Result<Instance> {
    let params = config.system_params(sweep_value, amax_db);
    let seed = RealizationSeed::new(config.seed, realization);
    let (_, derived) = generate(&config.geometry_at(sweep_value), &config.fading, params.num_elements, seed)?;
    let mut solver = config.solver.clone();
    solver.randomization_seed = seed.stream(LinkStream::Randomization).next_u64();
    Ok(Instance { params, derived, solver })
}

pub fn run_single(config: &ExperimentConfig, sweep_value: f64, scheme: Scheme, amax_db: f64, realization: u64) -> RunRecord {
    let started = Instant::now();
    let mut record = RunRecord {
        sweep_variable: config.sweep.variable,
        sweep_value,
        scheme,
        amax_db,
        realization,
        seed: config.seed,
        status: RunStatus::Ok,
        objective: None,
        total_energy: None,
        hap_energy: None,
        amplifier_energy: None,
        tau0: None,
        iterations: 0,
        wall_time: Duration::ZERO,
    };
    let outcome = build_instance(config, sweep_value, amax_db, realization)
        .and_then(|inst| solve_scheme(scheme, &inst.params, &inst.derived, &inst.solver).map(|s| (inst, s)));
    match outcome {
        Ok((inst, sol)) => {
            record.iterations = sol.iterations_used;
            if sol.feasibility.feasible && sol.objective.is_finite() {
                let used = if scheme.is_passive() { passive_params(&inst.params) } else { inst.params.clone() };
                let total = total_energy_consumption(&used, &inst.derived, &sol.allocation, &sol.reflections, sol.mode);
                let hap = used.hap_power * sol.allocation.tau0;
                record.objective = Some(sol.objective);
                record.total_energy = Some(total);
                record.hap_energy = Some(hap);
                record.amplifier_energy = Some(total - hap);
                record.tau0 = Some(sol.allocation.tau0);
            } else {
                record.status = RunStatus::Infeasible;
            }
        }
        Err(e) => record.status = RunStatus::Failed(e.to_string()),
    }
    record.wall_time = started.elapsed();
    record
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    /// Sorted by sweep value, realization, scheme and cap.
    pub records: Vec<RunRecord>,
    pub aggregate: Vec<AggregateRow>,
    pub wall_time: Duration,
}

/// Runs every `(sweep point, realization, scheme, a_max)` combination on a
/// pool of `workers` threads. Results are independent of `workers`.
pub fn run_sweep(config: &ExperimentConfig, workers: usize) -> Result<SweepOutput> {
    config.validate()?;
    let started = Instant::now();
    let mut tasks = Vec::new();
    for &value in &config.sweep.grid {
        for realization in 0..config.num_realizations as u64 {
            for (scheme, amax) in config.scheme_runs() {
                tasks.push((value, realization, scheme, amax));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    let records: Vec<RunRecord> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(value, realization, scheme, amax)| run_single(config, value, scheme, amax, realization))
            .collect()
    });
    let aggregate = aggregate(&records);
    Ok(SweepOutput { records, aggregate, wall_time: started.elapsed() })
}

/// First `(point, failed, total)` whose failure share exceeds the threshold.
pub fn failure_breach(output: &SweepOutput) -> Option<(String, usize, usize)> {
    let mut groups: Vec<(String, usize, usize)> = Vec::new();
    for r in &output.records {
        let label = format!("{}={} {} a_max_db={}", r.sweep_variable.name(), r.sweep_value, r.scheme.name(), r.amax_db);
        let failed = usize::from(r.status != RunStatus::Ok);
        match groups.iter_mut().find(|g| g.0 == label) {
            Some(g) => {
                g.1 += failed;
                g.2 += 1;
            }
            None => groups.push((label, failed, 1)),
        }
    }
    groups.into_iter().find(|(_, f, t)| *f as f64 > FAILURE_THRESHOLD * *t as f64)
}

/// Writes `records.csv`, `aggregate.csv`, `energy.csv` and `manifest.txt`.
pub fn write_outputs(config: &ExperimentConfig, output: &SweepOutput, workers: usize, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut records = Vec::new();
    write_records(&mut records, &output.records)?;
    let mut aggregate_bytes = Vec::new();
    write_aggregate(&mut aggregate_bytes, &output.aggregate)?;
    let mut energy = Vec::new();
    write_energy(&mut energy, &output.records)?;
    std::fs::write(dir.join("records.csv"), &records)?;
    std::fs::write(dir.join("aggregate.csv"), &aggregate_bytes)?;
    std::fs::write(dir.join("energy.csv"), &energy)?;
    let manifest = super::manifest::render(config, output, workers, &[("records.csv", &records), ("aggregate.csv", &aggregate_bytes), ("energy.csv", &energy)]);
    std::fs::write(dir.join("manifest.txt"), manifest)?;
    Ok(())
}

/// Runs the sweep, writes its outputs, then fails if any point lost more than
/// half of its runs.
pub fn execute_sweep(config: &ExperimentConfig, workers: usize, dir: &Path) -> Result<SweepOutput> {
    let output = run_sweep(config, workers)?;
    write_outputs(config, &output, workers, dir)?;
    if let Some((point, failed, total)) = failure_breach(&output) {
        return Err(Error::FailureThreshold { point, failed, total });
    }
    Ok(output)
}
