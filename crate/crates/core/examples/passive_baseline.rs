//! Active surface against a passive one of the same size.

use irswpcn::ao::{solve_passive_baseline, solve_ue, PassiveSetup};
use irswpcn::harness::{build_instance, ExperimentConfig};
use irswpcn::model::{total_energy_consumption, EnergyMode};

fn main() -> irswpcn::Result<()> {
    let inst = build_instance(&ExperimentConfig::default(), 20.0, 10.0, 0)?;
    let (p, d, c) = (&inst.params, &inst.derived, &inst.solver);
    let active = solve_ue(p, d, c)?;
    let passive = solve_passive_baseline(p, d, c, PassiveSetup::UserAdaptive)?;
    for (name, sol, mode) in [("active", &active, EnergyMode::Active), ("passive", &passive, EnergyMode::Passive)] {
        let energy = total_energy_consumption(p, d, &sol.allocation, &sol.reflections, mode);
        let peak = sol.reflections.all().iter().map(|v| v.max_amplitude()).fold(0.0, f64::max);
        println!("{name:>7}: {:.4} bits/Hz, {:.4e} J, largest amplitude {peak:.3}", sol.objective, energy);
    }
    Ok(())
}
