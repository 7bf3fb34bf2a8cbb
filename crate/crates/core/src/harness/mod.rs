//! Experiment configuration, Monte Carlo sweeps, CSV output and the command
//! line front end.

pub mod aggregate;
pub mod cli;
pub mod config;
pub mod manifest;
pub mod records;
pub mod sweep;

pub use aggregate::{aggregate, mean_stderr, AggregateRow};
pub use config::{ExperimentConfig, ParamsConfig, Scheme, SweepSpec, SweepVariable};
pub use records::{RunRecord, RunStatus};
pub use sweep::{build_instance, execute_sweep, run_single, run_sweep, solve_scheme, write_outputs, Instance, SweepOutput};
