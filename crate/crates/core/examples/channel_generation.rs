//! Places the default scenario and prints per-link channel strengths.
//!
//! `cargo run --example channel_generation -- [realization]`

use irswpcn::channel::{generate, FadingConfig, GeometryConfig, RealizationSeed};
use irswpcn::units::watts_to_dbm;

fn main() -> irswpcn::Result<()> {
    let realization = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let geometry = GeometryConfig::default();
    let fading = FadingConfig::default();
    let (pos, derived) = generate(&geometry, &fading, 10, RealizationSeed::new(1, realization))?;

    println!("HAP at {:?}, IRS at {:?}", pos.hap, pos.irs);
    let g_mean = derived.raw.g.iter().map(|z| z.norm_sqr()).sum::<f64>() / derived.num_elements() as f64;
    println!("HAP-IRS gain per element: {:.1} dB", 10.0 * g_mean.log10());
    for (k, device) in pos.devices.iter().enumerate() {
        let dev = derived.device(k);
        let cascade = dev.b.iter().map(|b| b.norm()).sum::<f64>().powi(2);
        println!(
            "device {k} at ({:.2}, {:.2}): direct {:.1} dB, coherent cascade {:.1} dB",
            device[0],
            device[1],
            10.0 * dev.h_d.norm_sqr().log10(),
            10.0 * cascade.log10()
        );
    }
    // received power of a 20 dBm broadcast over the direct link alone
    let rx = derived.raw.h_d.iter().map(|h| 0.1 * h.norm_sqr()).fold(0.0, f64::max);
    println!("strongest direct reception at 20 dBm: {:.1} dBm", watts_to_dbm(rx));
    Ok(())
}
