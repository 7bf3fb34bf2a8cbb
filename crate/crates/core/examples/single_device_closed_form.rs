//! Single-device amplitude rule for both link phases, checked against the
//! amplifying-power budget.

use irswpcn::ao::{closed_form_single_device_amplitudes, LinkPhase};
use irswpcn::harness::{build_instance, ExperimentConfig};
use irswpcn::model::{dl_amplify_power, harvest_rate, ul_amplify_power};

fn main() -> irswpcn::Result<()> {
    let mut config = ExperimentConfig::default();
    config.geometry.num_devices = 1;
    let inst = build_instance(&config, 20.0, 40.0, 0)?;
    let (p, d) = (&inst.params, &inst.derived);

    let dl = closed_form_single_device_amplitudes(p, d, LinkPhase::Downlink)?;
    let power = 1e-5;
    let ul = closed_form_single_device_amplitudes(p, d, LinkPhase::Uplink { power })?;
    println!("downlink factor {:.3e}, uplink factor {:.3e}", dl.factor, ul.factor);
    for (n, (a0, a1)) in dl.amplitudes.iter().zip(&ul.amplitudes).enumerate() {
        println!("element {n}: a0 = {a0:.3}, a1 = {a1:.3}");
    }
    let (v0, v1) = (dl.vector(), ul.vector());
    println!("downlink load {:.4e} W, uplink load {:.4e} W, budget {:.4e} W",
        dl_amplify_power(p, d, &v0), ul_amplify_power(p, &d.device(0), &v1, power), p.irs_power_budget);
    println!("harvest rate {:.4e} W", harvest_rate(p, &d.device(0), &v0));
    Ok(())
}
