//! `irswpcn {solve|sweep|check|emit-default-config}`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{ExperimentConfig, Scheme};
use super::sweep::{build_instance, execute_sweep, solve_scheme};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "irswpcn", version, about = "Active-IRS wireless powered network optimizer and sweep runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance and print the solution summary.
    Solve(RunArgs),
    /// Run the configured Monte Carlo sweep and write CSV results.
    Sweep(RunArgs),
    /// Run the built-in invariant and oracle checks.
    Check(CheckArgs),
    /// Write the default configuration (stdout without --config).
    EmitDefaultConfig {
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads (default: available cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Scheme for `solve` (default: first configured scheme).
    #[arg(long)]
    scheme: Option<String>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Instances used by the solver checks.
    #[arg(long, default_value_t = 3)]
    instances: usize,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_FAILURE,
    }
}

fn load(path: &std::path::Path, seed: Option<u64>) -> Result<ExperimentConfig, Error> {
    let mut config = ExperimentConfig::load(path)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    Ok(config)
}

fn list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| super::records::fmt_float(*x)).collect();
    format!("[{}]", parts.join(", "))
}

fn solve(args: &RunArgs, out: &mut dyn Write) -> Result<(), Error> {
    let config = load(&args.config, args.seed)?;
    let scheme: Scheme = match &args.scheme {
        Some(s) => s.parse()?,
        None => config.schemes[0],
    };
    let value = config.sweep.grid[0];
    let amax = if scheme.is_passive() { 0.0 } else { config.amax_db.first().copied().unwrap_or(0.0) };
    let inst = build_instance(&config, value, amax, 0)?;
    let sol = solve_scheme(scheme, &inst.params, &inst.derived, &inst.solver)?;
    let fmt = super::records::fmt_float;
    writeln!(out, "scheme = {}", scheme.name())?;
    writeln!(out, "seed = {}", config.seed)?;
    writeln!(out, "{} = {}", config.sweep.variable.name(), fmt(value))?;
    writeln!(out, "a_max_db = {}", fmt(amax))?;
    writeln!(out, "objective_bits_per_hz = {}", fmt(sol.objective))?;
    writeln!(out, "feasible = {}", sol.feasibility.feasible)?;
    writeln!(out, "min_constraint_slack = {}", fmt(sol.feasibility.min_slack()))?;
    writeln!(out, "iterations = {}", sol.iterations_used)?;
    writeln!(out, "converged = {}", sol.converged)?;
    writeln!(out, "objective_trace = {}", list(&sol.objective_trace))?;
    writeln!(out, "tau0 = {}", fmt(sol.allocation.tau0))?;
    writeln!(out, "tau = {}", list(&sol.allocation.tau))?;
    writeln!(out, "power = {}", list(&sol.allocation.power))?;
    writeln!(out, "downlink_amplitudes = {}", list(&sol.reflections.downlink().amplitudes()))?;
    Ok(())
}

fn sweep(args: &RunArgs, out: &mut dyn Write) -> Result<(), Error> {
    let mut config = load(&args.config, args.seed)?;
    if let Some(dir) = &args.out {
        config.output_dir = dir.clone();
    }
    let workers = args.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let result = execute_sweep(&config, workers, &config.output_dir);
    match &result {
        Ok(o) => writeln!(out, "{} records written to {}", o.records.len(), config.output_dir.display())?,
        Err(Error::FailureThreshold { .. }) => {
            writeln!(out, "outputs written to {} despite failures", config.output_dir.display())?
        }
        Err(_) => {}
    }
    result.map(|_| ())
}

fn check(args: &CheckArgs, out: &mut dyn Write) -> Result<bool, Error> {
    let mut config = match &args.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = args.seed {
        config.seed = s;
    }
    let outcomes = crate::diagnostics::run_checks(&config, args.instances.max(1))?;
    for o in &outcomes {
        writeln!(out, "{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail)?;
    }
    Ok(outcomes.iter().all(|o| o.passed))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Solve(a) => solve(a, out).map(|_| true),
        Command::Sweep(a) => sweep(a, out).map(|_| true),
        Command::Check(a) => check(a, out),
        Command::EmitDefaultConfig { config } => {
            let text = ExperimentConfig::default().to_toml();
            match config {
                Some(p) => std::fs::write(p, text).map_err(Error::from),
                None => out.write_all(text.as_bytes()).map_err(Error::from),
            }
            .map(|_| true)
        }
    };
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
