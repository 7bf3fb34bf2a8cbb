//! Runs the three active reflection setups on one realization.
//!
//! `cargo run --release --example compare_setups -- [realization]`

use irswpcn::ao::{solve_st, solve_ue, solve_ul};
use irswpcn::harness::{build_instance, ExperimentConfig};

fn main() -> irswpcn::Result<()> {
    let realization = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let inst = build_instance(&ExperimentConfig::default(), 20.0, 25.0, realization)?;
    let (p, d, c) = (&inst.params, &inst.derived, &inst.solver);
    for (name, sol) in [("user-adaptive", solve_ue(p, d, c)?), ("uplink-adaptive", solve_ul(p, d, c)?), ("static", solve_st(p, d, c)?)] {
        println!(
            "{name:>16}: {:.4} bits/Hz, tau0 {:.3}, {} outer iterations, feasible {}, {:.2} s",
            sol.objective,
            sol.allocation.tau0,
            sol.iterations_used,
            sol.feasibility.feasible,
            sol.wall_time.as_secs_f64()
        );
    }
    Ok(())
}
