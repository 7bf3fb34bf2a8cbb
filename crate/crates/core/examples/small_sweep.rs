//! A two-point HAP power sweep written to a temporary directory.

use irswpcn::harness::{execute_sweep, ExperimentConfig, Scheme};

fn main() -> irswpcn::Result<()> {
    let mut config = ExperimentConfig::default();
    config.num_realizations = 3;
    config.schemes = vec![Scheme::UlActive, Scheme::StaticPassive];
    config.amax_db = vec![25.0];
    config.sweep.grid = vec![10.0, 20.0];
    let dir = std::env::temp_dir().join("irswpcn-small-sweep");
    let out = execute_sweep(&config, 1, &dir)?;
    for row in &out.aggregate {
        println!(
            "P_A = {:>4} dBm {:>15}: {:.4} +/- {:.4} bits/Hz over {} runs",
            row.sweep_value,
            row.scheme.name(),
            row.objective_mean,
            row.objective_stderr,
            row.count
        );
    }
    println!("CSV files in {}", dir.display());
    Ok(())
}
