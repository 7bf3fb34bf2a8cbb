use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::st::solve_st_with_mode;
use super::{
    better_static_start, check_instance, finish, fp_loop_shared, gains, initial_vector, pick_better, OuterLoop, Solution,
    SolverConfig, Step,
};
use crate::channel::DerivedChannel;
use crate::convex::{gaussian_randomization, solve_time_power_convex, solve_time_power_sdp, SolveStatus};
use crate::model::{EnergyMode, ProblemKind, Reflections, SystemParams};
use crate::{Error, Result};

/// Weighted-sum-throughput maximization with one uplink vector shared by all
/// devices.
pub fn solve_ul(params: &SystemParams, derived: &DerivedChannel, config: &SolverConfig) -> Result<Solution> {
    solve_ul_with_mode(params, derived, config, EnergyMode::Active)
}

pub(crate) fn solve_ul_with_mode(
    params: &SystemParams,
    derived: &DerivedChannel,
    config: &SolverConfig,
    mode: EnergyMode,
) -> Result<Solution> {
    let started = Instant::now();
    check_instance(params, derived, config)?;
    let k_count = derived.num_devices();
    let mut rng = ChaCha8Rng::seed_from_u64(config.randomization_seed);
    let warm = if config.warm_start {
        Some(solve_st_with_mode(params, derived, config, mode)?)
    } else {
        None
    };
    let mut v1 = match &warm {
        Some(st) => st.reflections.downlink().clone(),
        None => {
            let init = initial_vector(params, derived, None, config.init_strategy);
            match better_static_start(params, derived, config, init.clone(), &mut rng)? {
                Some((v, _)) => v,
                None => init,
            }
        }
    };
    let mut outer = OuterLoop::new(config.ao_rel_tolerance);
    let mut fp_traces = Vec::new();
    for _ in 0..config.ao_max_iterations {
        let uplink = vec![v1.clone(); k_count];
        let g = gains(params, derived, &uplink)?;
        let sdp = solve_time_power_sdp(params, derived, &g, &uplink, &config.inner)?;
        if sdp.status == SolveStatus::Infeasible {
            if outer.incumbent.is_none() {
                return Err(Error::Solver("time/power relaxation infeasible at the first iteration".into()));
            }
            outer.converged = true;
            break;
        }
        let alloc = sdp.value.allocation.clone();
        if let Step::Stop = outer.offer(sdp.objective, (sdp.value, v1.clone())) {
            break;
        }
        let (v, trace) = fp_loop_shared(params, derived, &alloc, &v1, false, config)?;
        v1 = v;
        fp_traces.push(trace);
    }
    let (sdp, v1) = outer.incumbent.take().expect("at least one accepted iteration");
    let v0 = gaussian_randomization(params, derived, &sdp.lift, config.randomization_count, &mut rng)?.v;
    let uplink = vec![v1.clone(); k_count];
    let g = gains(params, derived, &uplink)?;
    let allocation = solve_time_power_convex(params, derived, &g, &v0, &uplink, &config.inner)?.value;
    let embedded = warm.map(|st| {
        let v = st.reflections.downlink().clone();
        (st.allocation, Reflections::UplinkAdaptive { downlink: v.clone(), uplink: v })
    });
    let (allocation, reflections) = pick_better(
        ProblemKind::UplinkAdaptive,
        params,
        derived,
        (allocation, Reflections::UplinkAdaptive { downlink: v0, uplink: v1 }),
        embedded,
    )?;
    finish(
        ProblemKind::UplinkAdaptive,
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
