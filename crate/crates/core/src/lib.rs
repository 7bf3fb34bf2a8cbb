//! Simulation and optimization toolkit for wireless powered communication
//! networks assisted by an active intelligent reflecting surface (IRS).
//!
//! A hybrid access point (HAP) broadcasts energy for `tau0` seconds, then each
//! of `K` devices spends what it harvested on an uplink slot of `tau_k`
//! seconds. An `N`-element active IRS amplifies and phase-shifts both phases.
//! The crate maximizes the weighted sum throughput under three reflection
//! setups:
//!
//! * user-adaptive: one downlink vector plus one uplink vector per device
//!   ([`ao::solve_ue`]),
//! * uplink-adaptive: one downlink vector plus one shared uplink vector
//!   ([`ao::solve_ul`]),
//! * static: a single vector for the whole frame ([`ao::solve_st`]).
//!
//! Module map:
//!
//! * [`channel`]: node placement, path loss, Rician/Rayleigh sampling and the
//!   derived matrices every formula uses.
//! * [`model`]: closed-form physical quantities and feasibility checks.
//! * [`convex`]: the convex subproblems (lifted SDP, QCQPs, time/power
//!   program), Gaussian randomization and the SCA surrogate.
//! * [`ao`]: fractional-programming updates and the alternating-optimization
//!   drivers, plus the passive-IRS baseline.
//! * [`harness`]: experiment configuration, Monte Carlo sweeps, CSV output and
//!   the `irswpcn` command line.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod ao;
pub mod channel;
pub mod convex;
pub mod diagnostics;
mod error;
pub mod harness;
pub mod model;
pub mod units;

pub use error::{Error, Result};

/// Complex baseband sample type used throughout the crate.
pub type C64 = nalgebra::Complex<f64>;
/// Complex column vector.
pub type CVector = nalgebra::DVector<C64>;
/// Complex dense matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
