//! Convex subproblems of the alternating-optimization algorithms, all solved
//! by the dense interior-point method in [`barrier`].

pub mod barrier;
mod allocation_block;
mod qcqp;
mod randomization;
mod sca;
mod sdp;
mod time_power;

pub use barrier::BarrierSettings;
pub use qcqp::{solve_qcqp_shared, solve_qcqp_vk, SharedKind, SharedQcqpOutcome};
pub use randomization::{gaussian_randomization, RandomizationOutcome};
pub use sca::sca_surrogate_qk;
pub use sdp::{solve_time_power_sdp, SdpLiftVariable, SdpSolution};
pub use time_power::solve_time_power_convex;

use crate::model::ResourceAllocation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    MaxIterations,
    Infeasible,
}

impl From<barrier::BarrierStatus> for SolveStatus {
    fn from(s: barrier::BarrierStatus) -> Self {
        match s {
            barrier::BarrierStatus::Optimal => SolveStatus::Optimal,
            barrier::BarrierStatus::MaxIterations => SolveStatus::MaxIterations,
            barrier::BarrierStatus::Infeasible | barrier::BarrierStatus::BadStart => SolveStatus::Infeasible,
        }
    }
}

/// Outcome of one convex solve.
#[derive(Debug, Clone)]
pub struct ConvexSolveResult<T> {
    pub value: T,
    /// Objective at `value`, recomputed from its analytic expression.
    pub objective: f64,
    pub status: SolveStatus,
    /// Duality-gap bound reached by the interior-point method.
    pub tolerance: f64,
}

/// Allocation returned by the time/power programs.
pub type AllocationResult = ConvexSolveResult<ResourceAllocation>;
