use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ul::solve_ul_with_mode;
use super::{
    check_instance, finish, fp_update_iota_ue, gains, initial_vector, pick_better, relative_change, OuterLoop, Solution,
    SolverConfig, Step,
};
use crate::channel::{DerivedChannel, DeviceView};
use crate::convex::{gaussian_randomization, solve_qcqp_vk, solve_time_power_convex, solve_time_power_sdp, SolveStatus};
use crate::model::{sinr_gain, ul_amplify_power, EnergyMode, ProblemKind, ReflectionVector, Reflections, SystemParams};
use crate::{Error, Result};

/// Per-device loop: `iota` update, then the closed-form QCQP. Returns the new
/// vector and the SINR-gain trace.
fn fp_loop_device(
    params: &SystemParams,
    dev: &DeviceView<'_>,
    power: f64,
    start: &ReflectionVector,
    config: &SolverConfig,
) -> Result<(ReflectionVector, Vec<f64>)> {
    let mut v = start.clone();
    let mut gain = sinr_gain(params, dev, &v)?;
    let mut trace = vec![gain];
    // a start outside this slot's constraints is replaced unconditionally
    let mut must_move = ul_amplify_power(params, dev, &v, power) > params.irs_power_budget
        || v.max_amplitude() > params.max_amplitude;
    for _ in 0..config.fp_max_iterations {
        let iota = fp_update_iota_ue(params, dev, &v)?;
        let candidate = solve_qcqp_vk(params, dev, power, iota)?;
        let next = sinr_gain(params, dev, &candidate)?;
        if !(next >= gain) && !must_move {
            break;
        }
        must_move = false;
        let done = relative_change(gain, next) < config.fp_rel_tolerance;
        v = candidate;
        gain = next;
        trace.push(gain);
        if done {
            break;
        }
    }
    Ok((v, trace))
}

/// Weighted-sum-throughput maximization with a dedicated uplink vector per
/// device.
pub fn solve_ue(params: &SystemParams, derived: &DerivedChannel, config: &SolverConfig) -> Result<Solution> {
    solve_ue_with_mode(params, derived, config, EnergyMode::Active)
}

pub(crate) fn solve_ue_with_mode(
    params: &SystemParams,
    derived: &DerivedChannel,
    config: &SolverConfig,
    mode: EnergyMode,
) -> Result<Solution> {
    let started = Instant::now();
    check_instance(params, derived, config)?;
    let k_count = derived.num_devices();
    let warm = if config.warm_start {
        Some(solve_ul_with_mode(params, derived, config, mode)?)
    } else {
        None
    };
    let mut uplink: Vec<ReflectionVector> = match &warm {
        Some(ul) => vec![ul.reflections.uplink(0).clone(); k_count],
        None => (0..k_count).map(|k| initial_vector(params, derived, Some(k), config.init_strategy)).collect(),
    };
    let mut outer = OuterLoop::new(config.ao_rel_tolerance);
    let mut fp_traces = Vec::new();
    for _ in 0..config.ao_max_iterations {
        let g = gains(params, derived, &uplink)?;
        let sdp = solve_time_power_sdp(params, derived, &g, &uplink, &config.inner)?;
        if sdp.status == SolveStatus::Infeasible {
            if outer.incumbent.is_none() {
                return Err(Error::Solver("time/power relaxation infeasible at the first iteration".into()));
            }
            outer.converged = true;
            break;
        }
        let power = sdp.value.allocation.power.clone();
        if let Step::Stop = outer.offer(sdp.objective, (sdp.value, uplink.clone())) {
            break;
        }
        for (k, dev) in derived.devices().enumerate() {
            let (v, trace) = fp_loop_device(params, &dev, power[k], &uplink[k], config)?;
            uplink[k] = v;
            fp_traces.push(trace);
        }
    }
    let (sdp, uplink) = outer.incumbent.take().expect("at least one accepted iteration");
    let mut rng = ChaCha8Rng::seed_from_u64(config.randomization_seed);
    let v0 = gaussian_randomization(params, derived, &sdp.lift, config.randomization_count, &mut rng)?.v;
    let g = gains(params, derived, &uplink)?;
    let allocation = solve_time_power_convex(params, derived, &g, &v0, &uplink, &config.inner)?.value;
    let embedded = warm.map(|ul| {
        let downlink = ul.reflections.downlink().clone();
        let shared = ul.reflections.uplink(0).clone();
        (ul.allocation, Reflections::UserAdaptive { downlink, uplink: vec![shared; k_count] })
    });
    let (allocation, reflections) = pick_better(
        ProblemKind::UserAdaptive,
        params,
        derived,
        (allocation, Reflections::UserAdaptive { downlink: v0, uplink }),
        embedded,
    )?;
    finish(
        ProblemKind::UserAdaptive,
        mode,
        params,
        derived,
        allocation,
        reflections,
        (outer.trace, outer.converged),
        fp_traces,
        started,
    )
}
