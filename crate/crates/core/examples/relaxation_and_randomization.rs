//! Solves the lifted downlink program for fixed uplink gains, then recovers
//! a reflection vector by Gaussian randomization.

use irswpcn::convex::{gaussian_randomization, solve_time_power_convex, solve_time_power_sdp};
use irswpcn::harness::{build_instance, ExperimentConfig};
use irswpcn::model::{sinr_gain, ReflectionVector};
use rand::SeedableRng;

fn main() -> irswpcn::Result<()> {
    let inst = build_instance(&ExperimentConfig::default(), 20.0, 25.0, 0)?;
    let (p, d) = (&inst.params, &inst.derived);
    let uplink = vec![ReflectionVector::zeros(p.num_elements); d.num_devices()];
    let gains: Vec<f64> = d.devices().zip(&uplink).map(|(dev, v)| sinr_gain(p, &dev, v)).collect::<Result<_, _>>()?;

    let sdp = solve_time_power_sdp(p, d, &gains, &uplink, &inst.solver.inner)?;
    println!("relaxation: {:.4} bits/Hz ({:?}), tau0 = {:.4}", sdp.objective, sdp.status, sdp.value.lift.tau0);
    let eig = sdp.value.lift.w.clone().symmetric_eigenvalues();
    let mut eig: Vec<f64> = eig.iter().copied().collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    println!("leading eigenvalues: {:.3e} {:.3e}", eig[0], eig[1]);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let rec = gaussian_randomization(p, d, &sdp.value.lift, 500, &mut rng)?;
    println!("recovered candidate {} keeps {:.1}% of the relaxed harvest", rec.candidate, 100.0 * rec.score);

    let tp = solve_time_power_convex(p, d, &gains, &rec.v, &uplink, &inst.solver.inner)?;
    println!("rank-one re-solve: {:.4} bits/Hz", tp.objective);
    Ok(())
}
