//! The built-in identity and oracle checks behind `irswpcn check`.

use irswpcn::diagnostics::run_checks;
use irswpcn::harness::ExperimentConfig;

fn main() -> irswpcn::Result<()> {
    let mut config = ExperimentConfig::default();
    config.params.num_elements = 6;
    for outcome in run_checks(&config, 2)? {
        println!("{} {}: {}", if outcome.passed { "PASS" } else { "FAIL" }, outcome.name, outcome.detail);
    }
    Ok(())
}
