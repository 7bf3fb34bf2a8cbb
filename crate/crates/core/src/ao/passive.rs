use super::st::solve_st_with_mode;
use super::ue::solve_ue_with_mode;
use super::{Solution, SolverConfig};
use crate::channel::DerivedChannel;
use crate::model::{EnergyMode, SystemParams};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PassiveSetup {
    UserAdaptive,
    Static,
}

/// Passive surface: unit amplitude cap, no amplifier noise and no amplifying
/// power budget.
pub fn passive_params(params: &SystemParams) -> SystemParams {
    SystemParams {
        max_amplitude: 1.0,
        irs_noise_dl: 0.0,
        irs_noise_ul: 0.0,
        irs_power_budget: f64::INFINITY,
        ..params.clone()
    }
}

/// Runs the matching active solver on [`passive_params`]; the solution is
/// tagged for passive energy accounting.
pub fn solve_passive_baseline(
    params: &SystemParams,
    derived: &DerivedChannel,
    config: &SolverConfig,
    setup: PassiveSetup,
) -> Result<Solution> {
    let passive = passive_params(params);
    match setup {
        PassiveSetup::UserAdaptive => solve_ue_with_mode(&passive, derived, config, EnergyMode::Passive),
        PassiveSetup::Static => solve_st_with_mode(&passive, derived, config, EnergyMode::Passive),
    }
}
