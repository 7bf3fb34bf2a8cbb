//! Physical model: parameters, decision variables and every closed-form
//! quantity (harvested energy, SINR, throughput, amplifying powers, energy
//! consumption), plus the per-problem feasibility check.

mod allocation;
mod feasibility;
mod params;
mod quantities;
mod reflection;

pub use allocation::ResourceAllocation;
pub use feasibility::{check_feasibility, FeasibilityReport, ProblemKind, DEFAULT_TOLERANCE};
pub use params::SystemParams;
pub use quantities::{
    dl_amplify_power, harvest_rate, harvested_energy, sinr_gain, throughput, total_energy_consumption,
    ul_amplify_power, uplink_sinr, weighted_sum_throughput, EnergyMode,
};
pub use reflection::{ReflectionVector, Reflections};
