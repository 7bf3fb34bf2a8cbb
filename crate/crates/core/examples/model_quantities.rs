//! Evaluates the physical quantities and the feasibility report for a
//! hand-built operating point.

use irswpcn::channel::{generate, FadingConfig, GeometryConfig, RealizationSeed};
use irswpcn::model::{
    check_feasibility, dl_amplify_power, harvested_energy, total_energy_consumption, uplink_sinr, weighted_sum_throughput,
    EnergyMode, ProblemKind, ReflectionVector, Reflections, ResourceAllocation, SystemParams, DEFAULT_TOLERANCE,
};
use irswpcn::{CVector, C64};

fn main() -> irswpcn::Result<()> {
    let params = SystemParams::default();
    let (_, derived) = generate(&GeometryConfig::default(), &FadingConfig::default(), params.num_elements, RealizationSeed::new(1, 0))?;

    // a modest uniform amplification, co-phased with device 0
    let dev0 = derived.device(0);
    let v = ReflectionVector(CVector::from_fn(params.num_elements, |n, _| {
        C64::from_polar(3.0, dev0.b[n].arg() - dev0.h_d.arg())
    }));
    println!("downlink amplifier load: {:.3e} W (budget {:.3e} W)", dl_amplify_power(&params, &derived, &v), params.irs_power_budget);

    let tau0 = 0.5;
    let tau = vec![0.125; 4];
    let power: Vec<f64> = derived
        .devices()
        .zip(&tau)
        .map(|(dev, t)| 0.9 * harvested_energy(&params, &dev, &v, tau0) / t)
        .collect();
    let alloc = ResourceAllocation::from_power(tau0, tau, power)?;
    for (k, dev) in derived.devices().enumerate() {
        println!("device {k}: p = {:.3e} W, SINR = {:.2}", alloc.power[k], uplink_sinr(&params, &dev, &v, alloc.power[k])?);
    }

    let refl = Reflections::Static { shared: v };
    let report = check_feasibility(ProblemKind::Static, &params, &derived, &alloc, &refl, DEFAULT_TOLERANCE)?;
    println!("feasible: {} (smallest slack {:.3e})", report.feasible, report.min_slack());
    println!("sum throughput: {:.3} bits/Hz", weighted_sum_throughput(&params, &derived, &alloc, &refl)?);
    println!("energy: {:.3e} J", total_energy_consumption(&params, &derived, &alloc, &refl, EnergyMode::Active));
    Ok(())
}
