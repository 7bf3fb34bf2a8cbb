//! Reflection-vector subproblems of the fractional-programming loops.

use nalgebra::{DMatrix, DVector};

use super::barrier::{BarrierSettings, ConvexProgram, DiagQuadRow, LinearRow, QuadraticObjective};
use super::sca::sca_affine;
use super::SolveStatus;
use crate::channel::{DerivedChannel, DeviceView};
use crate::model::{ReflectionVector, ResourceAllocation, SystemParams};
use crate::{CVector, Error, Result, C64};

/// Maximizes `2 Re{conj(iota) (h_d^H + b^H v)} - |iota|^2 (sigma_n2^2 v^H Q1 v + sigma_z2^2)`
/// subject to `p v^H Q2 v + sigma_n2^2 v^H v <= P_F` and `|v_n| <= a_max`.
///
/// The problem separates per element once the power constraint is dualized,
/// so the multiplier is found by bisection and each element is the clipped
/// stationary point of its own concave quadratic.
pub fn solve_qcqp_vk(params: &SystemParams, dev: &DeviceView<'_>, power: f64, iota: C64) -> Result<ReflectionVector> {
    if !(power >= 0.0) {
        return Err(Error::InvalidParameter(format!("transmit power {power} must be nonnegative")));
    }
    let n = dev.b.len();
    if iota == C64::new(0.0, 0.0) {
        return Ok(ReflectionVector::zeros(n));
    }
    let a_max = params.max_amplitude;
    let c: Vec<C64> = dev.b.iter().map(|b| iota * b).collect();
    let alpha: Vec<f64> = dev.q1.iter().map(|q| iota.norm_sqr() * params.irs_noise_ul * q).collect();
    let beta: Vec<f64> = dev.q2.iter().map(|q| power * q + params.irs_noise_ul).collect();
    let at = |lambda: f64| -> CVector {
        CVector::from_fn(n, |i, _| {
            let mag = c[i].norm();
            if mag == 0.0 {
                return C64::new(0.0, 0.0);
            }
            let kappa = alpha[i] + lambda * beta[i];
            let r = if kappa > 0.0 { (mag / kappa).min(a_max) } else { a_max };
            c[i] * (r / mag)
        })
    };
    let used = |v: &CVector| -> f64 { v.iter().zip(&beta).map(|(z, b)| b * z.norm_sqr()).sum() };
    let budget = params.irs_power_budget;
    let v = at(0.0);
    if !params.has_power_budget() || used(&v) <= budget {
        return Ok(ReflectionVector(v));
    }
    if budget <= 0.0 {
        return Ok(ReflectionVector::zeros(n));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while used(&at(hi)) > budget {
        lo = hi;
        hi *= 4.0;
        if !hi.is_finite() {
            return Err(Error::Solver("power multiplier diverged".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if used(&at(mid)) > budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ReflectionVector(at(hi)))
}

/// Which constraint set the shared vector obeys.
#[derive(Debug, Clone, Copy)]
pub enum SharedKind<'a> {
    /// Every device's uplink amplifying power and the amplitude caps.
    Uplink,
    /// Additionally the downlink amplifying power and energy causality
    /// linearized around `expansion`.
    Static { expansion: &'a ReflectionVector },
}

#[derive(Debug, Clone)]
pub struct SharedQcqpOutcome {
    pub v: ReflectionVector,
    /// Surrogate objective at `v` in bits.
    pub surrogate: f64,
    pub status: SolveStatus,
}

/// Surrogate `sum_k [w tau ln(1+chi) - w tau chi + u_k(v)] / ln 2`.
pub(crate) fn shared_surrogate(
    params: &SystemParams,
    derived: &DerivedChannel,
    alloc: &ResourceAllocation,
    chi: &[f64],
    iota: &[C64],
    v: &ReflectionVector,
) -> f64 {
    let v = v.as_vector();
    let mut total = 0.0;
    for (k, dev) in derived.devices().enumerate() {
        let (w, tau, p) = (params.weights[k], alloc.tau[k], alloc.power[k]);
        let z = dev.link(v);
        let s = (w * tau * (1.0 + chi[k]) * p).sqrt();
        let denom = p * z.norm_sqr() + params.irs_noise_ul * crate::channel::diag_form(dev.q1, v) + params.rx_noise_ul;
        let u = 2.0 * (iota[k].conj() * z).re * s - iota[k].norm_sqr() * denom;
        total += w * tau * chi[k].ln_1p() - w * tau * chi[k] + u;
    }
    total / std::f64::consts::LN_2
}

/// Maximizes the quadratic-transform surrogate of the weighted sum rate over
/// one vector shared by all uplink slots (and, for the static setup, by the
/// downlink too).
#[allow(clippy::too_many_arguments)]
pub fn solve_qcqp_shared(
    params: &SystemParams,
    derived: &DerivedChannel,
    alloc: &ResourceAllocation,
    chi: &[f64],
    iota: &[C64],
    kind: SharedKind<'_>,
    settings: &BarrierSettings,
) -> Result<SharedQcqpOutcome> {
    let n = derived.num_elements();
    let kc = derived.num_devices();
    if chi.len() != kc || iota.len() != kc || alloc.num_devices() != kc || params.num_devices() != kc {
        return Err(Error::Dimension("auxiliaries/allocation do not match device count".into()));
    }
    if chi.iter().any(|c| !(*c >= 0.0)) {
        return Err(Error::InvalidParameter("chi must be nonnegative".into()));
    }
    let has_budget = params.has_power_budget();
    let pf = params.irs_power_budget;

    let energy_rows: Vec<usize> = match kind {
        SharedKind::Static { .. } => (0..kc).filter(|&k| alloc.power[k] * alloc.tau[k] > 0.0).collect(),
        SharedKind::Uplink => Vec::new(),
    };
    let finish = |v: ReflectionVector, status| {
        let surrogate = shared_surrogate(params, derived, alloc, chi, iota, &v);
        Ok(SharedQcqpOutcome { v, surrogate, status })
    };
    if iota.iter().all(|i| *i == C64::new(0.0, 0.0)) && energy_rows.is_empty() {
        return finish(ReflectionVector::zeros(n), SolveStatus::Optimal);
    }
    if has_budget && pf <= 0.0 {
        return finish(ReflectionVector::zeros(n), SolveStatus::Optimal);
    }

    // per-element variable scale
    let scale: Vec<f64> = (0..n)
        .map(|i| {
            let mut per = 0.0f64;
            for k in 0..kc {
                per = per.max(alloc.power[k] * derived.q2[k][i] + params.irs_noise_ul);
            }
            if matches!(kind, SharedKind::Static { .. }) {
                per = per.max(params.hap_power * derived.q1[i] + params.irs_noise_dl);
            }
            let s = if has_budget && per > 0.0 { (pf / (n as f64 * per)).sqrt().min(params.max_amplitude) } else { params.max_amplitude };
            if s > 0.0 && s.is_finite() { s } else { params.max_amplitude }
        })
        .collect();

    // objective v^H A v - 2 Re{y^H v}
    let mut a = crate::CMatrix::zeros(n, n);
    let mut y = CVector::zeros(n);
    for (k, dev) in derived.devices().enumerate() {
        let (w, tau, p) = (params.weights[k], alloc.tau[k], alloc.power[k]);
        let m = iota[k].norm_sqr();
        if m == 0.0 {
            continue;
        }
        let s = (w * tau * (1.0 + chi[k]) * p).sqrt();
        a += dev.b * dev.b.adjoint() * C64::new(m * p, 0.0);
        for i in 0..n {
            a[(i, i)] += C64::new(m * params.irs_noise_ul * dev.q1[i], 0.0);
        }
        y += dev.b * (iota[k] * s - dev.h_d.conj() * (m * p));
    }
    let mut p_real = DMatrix::zeros(2 * n, 2 * n);
    let mut q_real = DVector::zeros(2 * n);
    for r in 0..n {
        for c in 0..n {
            let z = a[(r, c)] * (scale[r] * scale[c]);
            p_real[(r, c)] = 2.0 * z.re;
            p_real[(r + n, c + n)] = 2.0 * z.re;
            p_real[(r, c + n)] = -2.0 * z.im;
            p_real[(r + n, c)] = 2.0 * z.im;
        }
        q_real[r] = -2.0 * y[r].re * scale[r];
        q_real[r + n] = -2.0 * y[r].im * scale[r];
    }
    let norm = p_real.amax().max(q_real.amax());
    if norm > 0.0 {
        p_real /= norm;
        q_real /= norm;
    }
    let objective = QuadraticObjective { p: p_real, q: q_real };

    let mut quadratic = Vec::new();
    let ring = |weights: &dyn Fn(usize) -> f64, bound: f64| {
        let mut diag = Vec::with_capacity(2 * n);
        for i in 0..n {
            let d = weights(i) * scale[i] * scale[i] / bound;
            diag.push((i, d));
            diag.push((i + n, d));
        }
        DiagQuadRow { diag, linear: Vec::new(), bound: 1.0 }
    };
    for i in 0..n {
        let d = (scale[i] / params.max_amplitude).powi(2);
        quadratic.push(DiagQuadRow { diag: vec![(i, d), (i + n, d)], linear: Vec::new(), bound: 1.0 });
    }
    if has_budget {
        for k in 0..kc {
            let p = alloc.power[k];
            quadratic.push(ring(&|i| p * derived.q2[k][i] + params.irs_noise_ul, pf));
        }
        if matches!(kind, SharedKind::Static { .. }) {
            quadratic.push(ring(&|i| params.hap_power * derived.q1[i] + params.irs_noise_dl, pf));
        }
    }
    let mut linear = Vec::new();
    let mut x0 = DVector::zeros(2 * n);
    if let SharedKind::Static { expansion } = kind {
        for &k in &energy_rows {
            let dev = derived.device(k);
            let need = alloc.power[k] * alloc.tau[k];
            let gain = alloc.tau0 * params.efficiency;
            let (c0, l) = sca_affine(params, &dev, expansion);
            // need <= gain (c0 + 2 Re{l^H v})
            let mut coeffs = Vec::with_capacity(2 * n);
            for i in 0..n {
                coeffs.push((i, -2.0 * gain * l[i].re * scale[i] / need));
                coeffs.push((i + n, -2.0 * gain * l[i].im * scale[i] / need));
            }
            linear.push(LinearRow::new(coeffs, gain * c0 / need - 1.0));
        }
        for i in 0..n {
            x0[i] = expansion.0[i].re / scale[i];
            x0[i + n] = expansion.0[i].im / scale[i];
        }
    }
    let program = ConvexProgram { num_vars: 2 * n, objective: Some(&objective), linear, quadratic, lmi: None };
    let to_vector = |x: &DVector<f64>| ReflectionVector(CVector::from_fn(n, |i, _| C64::new(x[i], x[i + n]) * scale[i]));

    let start = if program.linear.is_empty() {
        DVector::zeros(2 * n)
    } else {
        // pull the expansion point strictly inside the quadratic rows
        let worst = program
            .quadratic
            .iter()
            .map(|r| r.diag.iter().map(|(j, d)| d * x0[*j] * x0[*j]).sum::<f64>() / r.bound)
            .fold(0.0f64, f64::max);
        let shrink = if worst > 0.0 { (1.0 - 1e-9) / worst.sqrt() } else { 1.0 };
        let pulled = &x0 * shrink.min(1.0 - 1e-9);
        match program.find_interior(&pulled, 1e-10, settings) {
            Some(x) => x,
            None => return finish(kind_fallback(kind, n), SolveStatus::Infeasible),
        }
    };
    let r = program.solve(start, settings);
    let status: SolveStatus = r.status.into();
    if status == SolveStatus::Infeasible {
        return finish(kind_fallback(kind, n), status);
    }
    finish(to_vector(&r.x), status)
}

fn kind_fallback(kind: SharedKind<'_>, n: usize) -> ReflectionVector {
    match kind {
        SharedKind::Static { expansion } => expansion.clone(),
        SharedKind::Uplink => ReflectionVector::zeros(n),
    }
}
