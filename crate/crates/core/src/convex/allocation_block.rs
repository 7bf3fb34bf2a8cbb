//! Variables, objective and rows shared by the two time/power programs:
//! per-device slot lengths `tau_k`, scaled energies `f_k / f_scale_k`, the
//! rate perspective objective, the uplink amplifying-power rows, the frame
//! budget and nonnegativity.

use nalgebra::{DMatrix, DVector};

use super::barrier::{LinearRow, SmoothObjective};
use crate::model::{ReflectionVector, ResourceAllocation, SystemParams};
use crate::channel::{diag_form, DerivedChannel};

/// `-sum w tau ln(1 + g f / tau)` over `(tau, f)` variable pairs.
pub(crate) struct RateObjective {
    pub terms: Vec<RateTerm>,
}

pub(crate) struct RateTerm {
    pub tau: usize,
    pub f: usize,
    pub weight: f64,
    pub gain: f64,
}

impl SmoothObjective for RateObjective {
    fn value(&self, x: &DVector<f64>) -> Option<f64> {
        let mut total = 0.0;
        for t in &self.terms {
            let (tau, f) = (x[t.tau], x[t.f]);
            if tau <= 0.0 {
                return None;
            }
            let u = t.gain * f / tau;
            if u <= -1.0 {
                return None;
            }
            total -= t.weight * tau * u.ln_1p();
        }
        Some(total)
    }

    fn accumulate(&self, x: &DVector<f64>, scale: f64, grad: &mut DVector<f64>, hess: &mut DMatrix<f64>) {
        for t in &self.terms {
            let (tau, f) = (x[t.tau], x[t.f]);
            let u = t.gain * f / tau;
            let w = scale * t.weight;
            grad[t.tau] -= w * (u.ln_1p() - u / (1.0 + u));
            grad[t.f] -= w * t.gain / (1.0 + u);
            let c = w / (tau * (1.0 + u) * (1.0 + u));
            hess[(t.tau, t.tau)] += c * u * u;
            hess[(t.tau, t.f)] -= c * u * t.gain;
            hess[(t.f, t.tau)] -= c * u * t.gain;
            hess[(t.f, t.f)] += c * t.gain * t.gain;
        }
    }
}

/// Devices that can carry rate, with their variable indices.
pub(crate) struct AllocationBlock {
    /// `(device, tau var, f var, f_scale)`
    pub active: Vec<(usize, usize, usize, f64)>,
    pub num_devices: usize,
}

impl AllocationBlock {
    /// Lays out `tau_k, f_k` for every device that can transmit, starting at
    /// variable `first`. `f_scale[k] > 0` is the energy unit of device `k`.
    pub fn new(params: &SystemParams, gains: &[f64], f_scale: &[f64], uplink: &[ReflectionVector], first: usize) -> Self {
        let mut active = Vec::new();
        let mut next = first;
        for k in 0..gains.len() {
            let noise_floor = params.irs_noise_ul * uplink[k].as_vector().norm_squared();
            let usable = params.weights[k] > 0.0
                && gains[k] > 0.0
                && f_scale[k] > 0.0
                && f_scale[k].is_finite()
                && (!params.has_power_budget() || noise_floor < params.irs_power_budget);
            if usable {
                active.push((k, next, next + 1, f_scale[k]));
                next += 2;
            }
        }
        Self { active, num_devices: gains.len() }
    }

    pub fn num_vars(&self) -> usize {
        2 * self.active.len()
    }

    /// Objective in nats; callers report bits from the analytic expression.
    pub fn objective(&self, params: &SystemParams, gains: &[f64]) -> RateObjective {
        RateObjective {
            terms: self
                .active
                .iter()
                .map(|&(k, tau, f, s)| RateTerm { tau, f, weight: params.weights[k], gain: gains[k] * s })
                .collect(),
        }
    }

    /// Uplink amplifying power per slot, time budget and nonnegativity.
    pub fn rows(&self, params: &SystemParams, derived: &DerivedChannel, uplink: &[ReflectionVector], tau0: usize) -> Vec<LinearRow> {
        let mut rows = Vec::new();
        if params.has_power_budget() {
            let pf = params.irs_power_budget;
            for &(k, tau, f, s) in &self.active {
                let v = uplink[k].as_vector();
                let c = diag_form(&derived.q2[k], v);
                if c > 0.0 {
                    let d = v.norm_squared();
                    rows.push(LinearRow::new(vec![(f, s * c / pf), (tau, params.irs_noise_ul * d / pf - 1.0)], 0.0));
                }
            }
        }
        let t = params.frame_time;
        let mut time = vec![(tau0, 1.0 / t)];
        time.extend(self.active.iter().map(|&(_, tau, _, _)| (tau, 1.0 / t)));
        rows.push(LinearRow::new(time, 1.0));
        for &(_, tau, f, _) in &self.active {
            rows.push(LinearRow::new(vec![(tau, -1.0)], 0.0));
            rows.push(LinearRow::new(vec![(f, -1.0)], 0.0));
        }
        rows
    }

    /// Strictly feasible start for `tau_k` and `f_k`: slots share a quarter
    /// of the frame; energies sit at half of `f_max[k]` (in scaled units) and
    /// half of the uplink amplifier allowance.
    pub fn start(&self, params: &SystemParams, derived: &DerivedChannel, uplink: &[ReflectionVector], f_max: &[f64], x: &mut DVector<f64>) {
        let tau_k = params.frame_time / (4.0 * self.active.len().max(1) as f64);
        for &(k, tau, f, s) in &self.active {
            x[tau] = tau_k;
            let mut fv = 0.5 * f_max[k];
            if params.has_power_budget() {
                let v = uplink[k].as_vector();
                let c = diag_form(&derived.q2[k], v);
                if c > 0.0 {
                    let room = (params.irs_power_budget - params.irs_noise_ul * v.norm_squared()) * tau_k / (s * c);
                    fv = fv.min(0.5 * room);
                }
            }
            x[f] = fv;
        }
    }

    /// Builds the allocation from a solution vector; eliminated devices get
    /// zero time and energy.
    pub fn extract(&self, tau0: f64, x: &DVector<f64>) -> ResourceAllocation {
        let mut tau = vec![0.0; self.num_devices];
        let mut energy = vec![0.0; self.num_devices];
        for &(k, tv, fv, s) in &self.active {
            tau[k] = x[tv].max(0.0);
            energy[k] = (x[fv] * s).max(0.0);
        }
        ResourceAllocation::from_energy(tau0.max(0.0), tau, energy).expect("nonnegative allocation")
    }
}

/// `sum w_k tau_k log2(1 + gamma_k f_k / tau_k)`.
pub(crate) fn rate_objective_bits(params: &SystemParams, gains: &[f64], alloc: &ResourceAllocation) -> f64 {
    (0..gains.len())
        .map(|k| {
            let tau = alloc.tau[k];
            if tau > 0.0 {
                params.weights[k] * tau * (1.0 + gains[k] * alloc.energy[k] / tau).log2()
            } else {
                0.0
            }
        })
        .sum()
}
