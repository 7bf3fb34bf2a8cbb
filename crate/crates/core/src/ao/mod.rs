//! Alternating-optimization drivers for the three reflection setups, their
//! fractional-programming inner loops, the single-device closed form and the
//! passive-surface baseline.

mod fp;
mod passive;
mod remark;
mod st;
mod ue;
mod ul;

pub use fp::{fp_update_chi, fp_update_iota_ue, fp_update_iota_ul};
pub use passive::{passive_params, solve_passive_baseline, PassiveSetup};
pub use remark::{closed_form_single_device_amplitudes, ClosedForm, LinkPhase};
pub use st::solve_st;
pub use ue::solve_ue;
pub use ul::solve_ul;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::channel::DerivedChannel;
use crate::convex::{
    gaussian_randomization, solve_qcqp_shared, solve_time_power_convex, solve_time_power_sdp, AllocationResult, BarrierSettings,
    SharedKind, SolveStatus,
};
use crate::model::{
    check_feasibility, sinr_gain, throughput, weighted_sum_throughput, EnergyMode, FeasibilityReport, ProblemKind,
    ReflectionVector, Reflections, ResourceAllocation, SystemParams, DEFAULT_TOLERANCE,
};
use crate::{CVector, Error, Result, C64};

/// Quadratic-transform auxiliaries.
#[derive(Debug, Clone, PartialEq)]
pub struct FPState {
    pub chi: Vec<f64>,
    pub iota: Vec<C64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitStrategy {
    /// Entries co-phased with the direct link, uniform amplitude at 90% of
    /// the downlink amplifying-power budget (or the cap).
    #[default]
    CoPhased,
    /// All-zero vectors.
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub ao_rel_tolerance: f64,
    pub ao_max_iterations: usize,
    pub fp_rel_tolerance: f64,
    pub fp_max_iterations: usize,
    pub randomization_count: usize,
    pub init_strategy: InitStrategy,
    /// Seed of the randomization stream.
    pub randomization_seed: u64,
    /// Start each setup from the solution of the next more restricted one
    /// (static, then uplink-adaptive, then user-adaptive) and return the
    /// better of the two points.
    pub warm_start: bool,
    pub inner: BarrierSettings,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            ao_rel_tolerance: 1e-4,
            ao_max_iterations: 50,
            fp_rel_tolerance: 1e-5,
            fp_max_iterations: 30,
            randomization_count: 500,
            init_strategy: InitStrategy::CoPhased,
            randomization_seed: 0,
            warm_start: true,
            inner: BarrierSettings::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.ao_rel_tolerance > 0.0 && self.fp_rel_tolerance > 0.0 && self.inner.gap_tolerance > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be > 0".into()));
        }
        if self.ao_max_iterations == 0 || self.fp_max_iterations == 0 || self.inner.max_newton_steps == 0 {
            return Err(Error::InvalidParameter("iteration caps must be >= 1".into()));
        }
        if !(self.inner.growth > 1.0 && self.inner.initial_t > 0.0) {
            return Err(Error::InvalidParameter("barrier growth must exceed 1 and initial t be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub kind: ProblemKind,
    pub mode: EnergyMode,
    pub allocation: ResourceAllocation,
    pub reflections: Reflections,
    /// Weighted sum throughput of the returned point (bits/Hz).
    pub objective: f64,
    /// Objective of the allocation subproblem at each outer iteration; for
    /// the lifted setups these are relaxation values.
    pub objective_trace: Vec<f64>,
    /// One trace per inner fractional-programming loop.
    pub fp_traces: Vec<Vec<f64>>,
    pub feasibility: FeasibilityReport,
    pub iterations_used: usize,
    /// `false` when the iteration cap stopped the outer loop.
    pub converged: bool,
    pub wall_time: Duration,
}

pub(crate) fn relative_change(old: f64, new: f64) -> f64 {
    let scale = old.abs().max(new.abs());
    if scale == 0.0 {
        0.0
    } else {
        (new - old).abs() / scale
    }
}

pub(crate) fn check_instance(params: &SystemParams, derived: &DerivedChannel, config: &SolverConfig) -> Result<()> {
    params.validate()?;
    config.validate()?;
    if derived.num_devices() != params.num_devices() || derived.num_elements() != params.num_elements {
        return Err(Error::Dimension(format!(
            "channel has {} devices x {} elements, params expect {} x {}",
            derived.num_devices(),
            derived.num_elements(),
            params.num_devices(),
            params.num_elements
        )));
    }
    Ok(())
}

/// Starting vector aligned with `device`'s direct link (the heaviest device
/// when `None`).
pub(crate) fn initial_vector(
    params: &SystemParams,
    derived: &DerivedChannel,
    device: Option<usize>,
    strategy: InitStrategy,
) -> ReflectionVector {
    let n = derived.num_elements();
    if strategy == InitStrategy::Zero {
        return ReflectionVector::zeros(n);
    }
    let k = device.unwrap_or_else(|| {
        (0..params.num_devices()).fold(0, |best, i| if params.weights[i] > params.weights[best] { i } else { best })
    });
    let dev = derived.device(k);
    let amp = if params.has_power_budget() {
        let per: f64 = derived.q1.iter().map(|q| params.hap_power * q + params.irs_noise_dl).sum();
        if per > 0.0 {
            (0.9 * (params.irs_power_budget / per).sqrt()).min(params.max_amplitude)
        } else {
            params.max_amplitude
        }
    } else {
        params.max_amplitude
    };
    let anchor = dev.h_d.arg();
    ReflectionVector(CVector::from_fn(n, |i, _| C64::from_polar(amp, dev.b[i].arg() - anchor)))
}

pub(crate) fn gains(params: &SystemParams, derived: &DerivedChannel, uplink: &[ReflectionVector]) -> Result<Vec<f64>> {
    derived.devices().zip(uplink).map(|(dev, v)| sinr_gain(params, &dev, v)).collect()
}

/// Weighted sum rate with every slot using `v`.
pub(crate) fn shared_rate(params: &SystemParams, derived: &DerivedChannel, alloc: &ResourceAllocation, v: &ReflectionVector) -> Result<f64> {
    derived
        .devices()
        .enumerate()
        .map(|(k, dev)| Ok(params.weights[k] * throughput(params, &dev, alloc.tau[k], alloc.power[k], v)?))
        .sum()
}

/// Fractional-programming loop on one vector shared by every uplink slot.
/// Steps that lower the true weighted rate are rejected, which ends the loop.
pub(crate) fn fp_loop_shared(
    params: &SystemParams,
    derived: &DerivedChannel,
    alloc: &ResourceAllocation,
    start: &ReflectionVector,
    is_static: bool,
    config: &SolverConfig,
) -> Result<(ReflectionVector, Vec<f64>)> {
    let mut v = start.clone();
    let mut rate = shared_rate(params, derived, alloc, &v)?;
    let mut trace = vec![rate];
    for _ in 0..config.fp_max_iterations {
        let mut chi = Vec::with_capacity(alloc.num_devices());
        let mut iota = Vec::with_capacity(alloc.num_devices());
        for (k, dev) in derived.devices().enumerate() {
            let c = fp_update_chi(params, &dev, alloc.power[k], &v)?;
            iota.push(fp_update_iota_ul(params, &dev, params.weights[k], alloc.tau[k], alloc.power[k], c, &v)?);
            chi.push(c);
        }
        let kind = if is_static { SharedKind::Static { expansion: &v } } else { SharedKind::Uplink };
        let step = solve_qcqp_shared(params, derived, alloc, &chi, &iota, kind, &config.inner)?;
        if step.status == SolveStatus::Infeasible {
            break;
        }
        let candidate = shared_rate(params, derived, alloc, &step.v)?;
        if !(candidate >= rate) {
            break;
        }
        let done = relative_change(rate, candidate) < config.fp_rel_tolerance;
        v = step.v;
        rate = candidate;
        trace.push(rate);
        if done {
            break;
        }
    }
    Ok((v, trace))
}

fn time_power(
    params: &SystemParams,
    derived: &DerivedChannel,
    config: &SolverConfig,
    v: &ReflectionVector,
) -> Result<Option<AllocationResult>> {
    let shared = vec![v.clone(); derived.num_devices()];
    let g = gains(params, derived, &shared)?;
    let tp = solve_time_power_convex(params, derived, &g, v, &shared, &config.inner)?;
    Ok((tp.status != SolveStatus::Infeasible).then_some(tp))
}

/// Vector recovered from the lifted downlink relaxation at the SINR gains of
/// `v`, if the relaxation and the recovery both succeed.
fn relaxed_candidate<R: rand::Rng>(
    params: &SystemParams,
    derived: &DerivedChannel,
    config: &SolverConfig,
    v: &ReflectionVector,
    rng: &mut R,
) -> Option<ReflectionVector> {
    let shared = vec![v.clone(); derived.num_devices()];
    let g = gains(params, derived, &shared).ok()?;
    let sdp = solve_time_power_sdp(params, derived, &g, &shared, &config.inner).ok()?;
    if sdp.status == SolveStatus::Infeasible || !(sdp.value.lift.tau0 > 0.0) {
        return None;
    }
    gaussian_randomization(params, derived, &sdp.value.lift, config.randomization_count, rng).ok().map(|o| o.v)
}

/// Allocation for the better of `v` and its relaxation-recovered
/// alternative. With every amplitude cap and energy row tight the linearized
/// inner step can barely leave its start, and the alternative lets the outer
/// loop jump to a different downlink pattern when that pays off.
pub(crate) fn better_static_start<R: rand::Rng>(
    params: &SystemParams,
    derived: &DerivedChannel,
    config: &SolverConfig,
    v: ReflectionVector,
    rng: &mut R,
) -> Result<Option<(ReflectionVector, AllocationResult)>> {
    let own = time_power(params, derived, config, &v)?;
    let alt = match relaxed_candidate(params, derived, config, &v, rng) {
        Some(r) => time_power(params, derived, config, &r)?.map(|tp| (r, tp)),
        None => None,
    };
    Ok(match (own, alt) {
        (Some(a), Some((r, b))) if b.objective > a.objective => Some((r, b)),
        (Some(a), _) => Some((v, a)),
        (None, alt) => alt,
    })
}

/// Outer-loop bookkeeping shared by the drivers: records subproblem values,
/// rejects a decrease (keeping the incumbent) and detects convergence.
pub(crate) struct OuterLoop<T> {
    pub trace: Vec<f64>,
    pub incumbent: Option<T>,
    pub converged: bool,
    tolerance: f64,
}

pub(crate) enum Step {
    Continue,
    Stop,
}

impl<T> OuterLoop<T> {
    pub fn new(tolerance: f64) -> Self {
        Self { trace: Vec::new(), incumbent: None, converged: false, tolerance }
    }

    pub fn offer(&mut self, value: f64, state: T) -> Step {
        match self.trace.last().copied() {
            Some(last) if !(value >= last) => {
                self.converged = true;
                Step::Stop
            }
            last => {
                self.trace.push(value);
                self.incumbent = Some(state);
                if let Some(last) = last {
                    if relative_change(last, value) < self.tolerance {
                        self.converged = true;
                        return Step::Stop;
                    }
                }
                Step::Continue
            }
        }
    }
}

/// `own` unless `embedded` is feasible for `kind` and scores strictly higher.
pub(crate) fn pick_better(
    kind: ProblemKind,
    params: &SystemParams,
    derived: &DerivedChannel,
    own: (ResourceAllocation, Reflections),
    embedded: Option<(ResourceAllocation, Reflections)>,
) -> Result<(ResourceAllocation, Reflections)> {
    let Some(alt) = embedded else {
        return Ok(own);
    };
    let mine = weighted_sum_throughput(params, derived, &own.0, &own.1)?;
    let theirs = weighted_sum_throughput(params, derived, &alt.0, &alt.1)?;
    let feasible = check_feasibility(kind, params, derived, &alt.0, &alt.1, DEFAULT_TOLERANCE)?.feasible;
    Ok(if feasible && theirs > mine { alt } else { own })
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn finish(
    kind: ProblemKind,
    mode: EnergyMode,
    params: &SystemParams,
    derived: &DerivedChannel,
    allocation: ResourceAllocation,
    reflections: Reflections,
    outer: (Vec<f64>, bool),
    fp_traces: Vec<Vec<f64>>,
    started: Instant,
) -> Result<Solution> {
    let objective = weighted_sum_throughput(params, derived, &allocation, &reflections)?;
    let feasibility = check_feasibility(kind, params, derived, &allocation, &reflections, DEFAULT_TOLERANCE)?;
    let (objective_trace, converged) = outer;
    Ok(Solution {
        kind,
        mode,
        allocation,
        reflections,
        objective,
        iterations_used: objective_trace.len(),
        objective_trace,
        fp_traces,
        feasibility,
        converged,
        wall_time: started.elapsed(),
    })
}
