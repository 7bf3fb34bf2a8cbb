//! Time/power program with the downlink vector held fixed.

use nalgebra::DVector;

use super::allocation_block::{rate_objective_bits, AllocationBlock};
use super::barrier::{BarrierSettings, ConvexProgram, LinearRow};
use super::{AllocationResult, ConvexSolveResult, SolveStatus};
use crate::channel::DerivedChannel;
use crate::model::{harvest_rate, ReflectionVector, SystemParams};
use crate::{Error, Result};

/// Maximizes `sum w_k tau_k log2(1 + gamma_k f_k / tau_k)` subject to
/// `f_k <= tau0 E_k(v0)`, each slot's amplifying power with `uplink[k]`, and
/// the frame budget.
pub fn solve_time_power_convex(
    params: &SystemParams,
    derived: &DerivedChannel,
    gains: &[f64],
    v0: &ReflectionVector,
    uplink: &[ReflectionVector],
    settings: &BarrierSettings,
) -> Result<AllocationResult> {
    params.validate()?;
    let k_count = derived.num_devices();
    if gains.len() != k_count || uplink.len() != k_count || params.num_devices() != k_count {
        return Err(Error::Dimension("gains/uplink vectors do not match device count".into()));
    }
    if gains.iter().any(|g| !(*g >= 0.0)) {
        return Err(Error::InvalidParameter("SINR gains must be nonnegative".into()));
    }
    // energy unit: one second of harvesting
    let rates: Vec<f64> = derived.devices().map(|d| harvest_rate(params, &d, v0)).collect();
    let block = AllocationBlock::new(params, gains, &rates, uplink, 1);
    let tau0 = 0;
    let num_vars = 1 + block.num_vars();

    let mut linear: Vec<LinearRow> = block
        .active
        .iter()
        .map(|&(_, _, f, _)| LinearRow::new(vec![(f, 1.0), (tau0, -1.0)], 0.0))
        .collect();
    linear.extend(block.rows(params, derived, uplink, tau0));
    let objective = block.objective(params, gains);
    let program = ConvexProgram { num_vars, objective: Some(&objective), linear, ..Default::default() };

    let mut x0 = DVector::zeros(num_vars);
    x0[tau0] = 0.5 * params.frame_time;
    let f_max = vec![x0[tau0]; k_count];
    block.start(params, derived, uplink, &f_max, &mut x0);

    let (x, status, gap) = if block.active.is_empty() {
        (x0, SolveStatus::Optimal, 0.0)
    } else {
        let r = program.solve(x0, settings);
        (r.x, r.status.into(), r.gap)
    };
    let allocation = block.extract(x[tau0], &x);
    let objective = rate_objective_bits(params, gains, &allocation);
    Ok(ConvexSolveResult { value: allocation, objective, status, tolerance: gap })
}
