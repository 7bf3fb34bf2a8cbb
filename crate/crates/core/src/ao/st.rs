use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{better_static_start, check_instance, finish, fp_loop_shared, initial_vector, OuterLoop, Solution, SolverConfig, Step};
use crate::channel::DerivedChannel;
use crate::model::{EnergyMode, ProblemKind, Reflections, SystemParams};
use crate::{Error, Result};

/// Weighted-sum-throughput maximization with one vector for the whole frame.
/// Energy causality couples the vector to the allocation and is handled by
/// its tangent lower bound, refreshed once per inner pass.
pub fn solve_st(params: &SystemParams, derived: &DerivedChannel, config: &SolverConfig) -> Result<Solution> {
    solve_st_with_mode(params, derived, config, EnergyMode::Active)
}

pub(crate) fn solve_st_with_mode(
    params: &SystemParams,
    derived: &DerivedChannel,
    config: &SolverConfig,
    mode: EnergyMode,
) -> Result<Solution> {
    let started = Instant::now();
    check_instance(params, derived, config)?;
    let mut v0 = initial_vector(params, derived, None, config.init_strategy);
    let mut rng = ChaCha8Rng::seed_from_u64(config.randomization_seed);
    let mut outer = OuterLoop::new(config.ao_rel_tolerance);
    let mut fp_traces = Vec::new();
    for _ in 0..config.ao_max_iterations {
        let Some((v, tp)) = better_static_start(params, derived, config, v0, &mut rng)? else {
            if outer.incumbent.is_none() {
                return Err(Error::Solver("time/power program infeasible at the first iteration".into()));
            }
            outer.converged = true;
            break;
        };
        let alloc = tp.value.clone();
        if let Step::Stop = outer.offer(tp.objective, (tp.value, v.clone())) {
            break;
        }
        let (next, trace) = fp_loop_shared(params, derived, &alloc, &v, true, config)?;
        v0 = next;
        fp_traces.push(trace);
    }
    let (allocation, v0) = outer.incumbent.take().expect("at least one accepted iteration");
    finish(
        ProblemKind::Static,
        mode,
        params,
        derived,
        allocation,
        Reflections::Static { shared: v0 },
        (outer.trace, outer.converged),
        fp_traces,
        started,
    )
}
