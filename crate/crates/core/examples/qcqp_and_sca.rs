//! One fractional-programming step of each reflection subproblem, plus the
//! SCA bound the static setup uses for energy causality.

use irswpcn::ao::{fp_update_chi, fp_update_iota_ue, fp_update_iota_ul};
use irswpcn::convex::{sca_surrogate_qk, solve_qcqp_shared, solve_qcqp_vk, SharedKind};
use irswpcn::harness::{build_instance, ExperimentConfig};
use irswpcn::model::{harvest_rate, sinr_gain, ReflectionVector, ResourceAllocation};

fn main() -> irswpcn::Result<()> {
    let inst = build_instance(&ExperimentConfig::default(), 20.0, 25.0, 1)?;
    let (p, d) = (&inst.params, &inst.derived);
    let alloc = ResourceAllocation::from_power(0.5, vec![0.125; 4], vec![1e-5; 4])?;
    let zero = ReflectionVector::zeros(p.num_elements);

    let dev = d.device(0);
    let iota = fp_update_iota_ue(p, &dev, &zero)?;
    let v0 = solve_qcqp_vk(p, &dev, alloc.power[0], iota)?;
    println!("device 0 SINR gain: {:.3e} -> {:.3e}", sinr_gain(p, &dev, &zero)?, sinr_gain(p, &dev, &v0)?);

    let mut chi = Vec::new();
    let mut iotas = Vec::new();
    for (k, dev) in d.devices().enumerate() {
        let c = fp_update_chi(p, &dev, alloc.power[k], &zero)?;
        iotas.push(fp_update_iota_ul(p, &dev, p.weights[k], alloc.tau[k], alloc.power[k], c, &zero)?);
        chi.push(c);
    }
    let shared = solve_qcqp_shared(p, d, &alloc, &chi, &iotas, SharedKind::Uplink, &inst.solver.inner)?;
    println!("shared uplink step: surrogate {:.4} bits/Hz ({:?})", shared.surrogate, shared.status);

    // the tangent bound is exact at its expansion point and below elsewhere
    let exact = harvest_rate(p, &dev, &shared.v) / p.efficiency;
    let at_self = sca_surrogate_qk(p, &dev, &shared.v, &shared.v);
    let from_zero = sca_surrogate_qk(p, &dev, &shared.v, &zero);
    println!("q(v) = {exact:.4e}, tangent at v {at_self:.4e}, tangent at 0 {from_zero:.4e}");
    Ok(())
}
