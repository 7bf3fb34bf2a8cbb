//! Dense log-barrier interior-point method for the small convex programs of
//! this crate: a smooth convex objective, sparse linear inequalities,
//! separable quadratic inequalities and at most one complex Hermitian linear
//! matrix inequality.
//!
//! Each centering step is a damped Newton method on
//! `t f(x) - sum log(slack) - log det M(x)`; `t` grows geometrically until the
//! duality-gap bound `nu / t` drops below the requested tolerance. Iterates
//! are strictly feasible throughout.

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{CMatrix, C64};

/// Convex objective (to be minimized) with first and second derivatives.
pub trait SmoothObjective {
    /// `None` outside the domain.
    fn value(&self, x: &DVector<f64>) -> Option<f64>;
    /// Adds `scale * grad` and `scale * hess` into the buffers.
    fn accumulate(&self, x: &DVector<f64>, scale: f64, grad: &mut DVector<f64>, hess: &mut DMatrix<f64>);
}

/// `c^T x`.
pub struct LinearObjective(pub DVector<f64>);

impl SmoothObjective for LinearObjective {
    fn value(&self, x: &DVector<f64>) -> Option<f64> {
        Some(self.0.dot(x))
    }

    fn accumulate(&self, _x: &DVector<f64>, scale: f64, grad: &mut DVector<f64>, _hess: &mut DMatrix<f64>) {
        grad.axpy(scale, &self.0, 1.0);
    }
}

/// `1/2 x^T P x + q^T x` with `P` symmetric positive semidefinite.
pub struct QuadraticObjective {
    pub p: DMatrix<f64>,
    pub q: DVector<f64>,
}

impl SmoothObjective for QuadraticObjective {
    fn value(&self, x: &DVector<f64>) -> Option<f64> {
        Some(0.5 * x.dot(&(&self.p * x)) + self.q.dot(x))
    }

    fn accumulate(&self, x: &DVector<f64>, scale: f64, grad: &mut DVector<f64>, hess: &mut DMatrix<f64>) {
        grad.axpy(scale, &(&self.p * x + &self.q), 1.0);
        *hess += &self.p * scale;
    }
}

/// Sparse row `sum a_j x_j <= bound`.
#[derive(Debug, Clone, Default)]
pub struct LinearRow {
    pub coeffs: Vec<(usize, f64)>,
    pub bound: f64,
}

impl LinearRow {
    pub fn new(coeffs: Vec<(usize, f64)>, bound: f64) -> Self {
        Self { coeffs, bound }
    }

    fn slack(&self, x: &DVector<f64>) -> f64 {
        self.bound - self.coeffs.iter().map(|(j, a)| a * x[*j]).sum::<f64>()
    }

    fn directional(&self, d: &DVector<f64>) -> f64 {
        self.coeffs.iter().map(|(j, a)| a * d[*j]).sum()
    }
}

/// Separable quadratic `sum d_j x_j^2 + sum c_j x_j <= bound`, `d_j >= 0`.
#[derive(Debug, Clone, Default)]
pub struct DiagQuadRow {
    pub diag: Vec<(usize, f64)>,
    pub linear: Vec<(usize, f64)>,
    pub bound: f64,
}

impl DiagQuadRow {
    fn slack(&self, x: &DVector<f64>) -> f64 {
        self.bound
            - self.diag.iter().map(|(j, d)| d * x[*j] * x[*j]).sum::<f64>()
            - self.linear.iter().map(|(j, c)| c * x[*j]).sum::<f64>()
    }
}

/// `M(x) = constant + sum_j x_j E_j >= 0` (Hermitian), where `terms[j]` lists
/// the entries `(row, col, coeff)` of `E_j`. The caller keeps `M(x)` Hermitian
/// for every real `x`.
#[derive(Debug, Clone)]
pub struct HermitianLmi {
    pub dim: usize,
    pub constant: CMatrix,
    pub terms: Vec<(usize, Vec<(usize, usize, C64)>)>,
}

impl HermitianLmi {
    pub fn matrix(&self, x: &DVector<f64>) -> CMatrix {
        let mut m = self.constant.clone();
        for (var, entries) in &self.terms {
            let xv = x[*var];
            if xv == 0.0 {
                continue;
            }
            for (r, c, a) in entries {
                m[(*r, *c)] += a * xv;
            }
        }
        m
    }
}

#[derive(Default)]
pub struct ConvexProgram<'a> {
    pub num_vars: usize,
    pub objective: Option<&'a dyn SmoothObjective>,
    pub linear: Vec<LinearRow>,
    pub quadratic: Vec<DiagQuadRow>,
    pub lmi: Option<HermitianLmi>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BarrierSettings {
    /// Target bound on `f(x) - f*`, relative to `max(1, |f(x)|)`.
    pub gap_tolerance: f64,
    pub growth: f64,
    pub initial_t: f64,
    pub max_newton_steps: usize,
}

impl Default for BarrierSettings {
    fn default() -> Self {
        Self { gap_tolerance: 1e-10, growth: 25.0, initial_t: 1.0, max_newton_steps: 600 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarrierStatus {
    Optimal,
    MaxIterations,
    /// No strictly feasible point was found.
    Infeasible,
    /// The starting point handed to the solver is not strictly feasible.
    BadStart,
}

#[derive(Debug, Clone)]
pub struct BarrierResult {
    pub x: DVector<f64>,
    pub objective: f64,
    pub status: BarrierStatus,
    /// Duality-gap bound at exit.
    pub gap: f64,
    pub newton_steps: usize,
}

fn hermitian_logdet_and_inverse(m: &CMatrix, want_inverse: bool) -> Option<(f64, Option<CMatrix>)> {
    let chol = Cholesky::new(m.clone())?;
    let l = chol.l_dirty();
    let mut logdet = 0.0;
    for i in 0..m.nrows() {
        // nalgebra takes complex square roots of negative pivots
        let d = l[(i, i)].re;
        if !(d > 0.0) || !d.is_finite() || l[(i, i)].im.abs() > 1e-9 * d {
            return None;
        }
        logdet += 2.0 * d.ln();
    }
    let inv = want_inverse.then(|| chol.inverse());
    Some((logdet, inv))
}

impl ConvexProgram<'_> {
    fn barrier_parameter(&self) -> f64 {
        (self.linear.len() + self.quadratic.len() + self.lmi.as_ref().map_or(0, |l| l.dim)) as f64
    }

    /// Barrier-augmented value, `None` when `x` is not strictly feasible.
    fn merit(&self, x: &DVector<f64>, t: f64) -> Option<f64> {
        let mut total = match self.objective {
            Some(obj) => t * obj.value(x)?,
            None => 0.0,
        };
        for row in &self.linear {
            let s = row.slack(x);
            if !(s > 0.0) {
                return None;
            }
            total -= s.ln();
        }
        for row in &self.quadratic {
            let s = row.slack(x);
            if !(s > 0.0) {
                return None;
            }
            total -= s.ln();
        }
        if let Some(lmi) = &self.lmi {
            let (logdet, _) = hermitian_logdet_and_inverse(&lmi.matrix(x), false)?;
            total -= logdet;
        }
        total.is_finite().then_some(total)
    }

    pub fn is_strictly_feasible(&self, x: &DVector<f64>) -> bool {
        self.merit(x, 0.0).is_some()
    }

    fn derivatives(&self, x: &DVector<f64>, t: f64) -> (DVector<f64>, DMatrix<f64>) {
        let n = self.num_vars;
        let mut grad = DVector::zeros(n);
        let mut hess = DMatrix::zeros(n, n);
        if let Some(obj) = self.objective {
            obj.accumulate(x, t, &mut grad, &mut hess);
        }
        for row in &self.linear {
            let s = row.slack(x);
            for (i, ai) in &row.coeffs {
                grad[*i] += ai / s;
                for (j, aj) in &row.coeffs {
                    hess[(*i, *j)] += ai * aj / (s * s);
                }
            }
        }
        for row in &self.quadratic {
            let s = row.slack(x);
            // g(x) = -slack; grad(-log s) = grad g / s, hess = grad g grad g^T / s^2 + hess g / s
            let mut gg: Vec<(usize, f64)> = row.linear.clone();
            for (j, d) in &row.diag {
                gg.push((*j, 2.0 * d * x[*j]));
            }
            for (i, gi) in &gg {
                grad[*i] += gi / s;
                for (j, gj) in &gg {
                    hess[(*i, *j)] += gi * gj / (s * s);
                }
            }
            for (j, d) in &row.diag {
                hess[(*j, *j)] += 2.0 * d / s;
            }
        }
        if let Some(lmi) = &self.lmi {
            if let Some((_, Some(a))) = hermitian_logdet_and_inverse(&lmi.matrix(x), true) {
                for (vi, ei) in &lmi.terms {
                    let mut g = C64::new(0.0, 0.0);
                    for (r, c, alpha) in ei {
                        g += alpha * a[(*c, *r)];
                    }
                    grad[*vi] -= g.re;
                }
                for (ii, (vi, ei)) in lmi.terms.iter().enumerate() {
                    for (vj, ej) in &lmi.terms[ii..] {
                        let mut h = C64::new(0.0, 0.0);
                        for (r1, c1, alpha) in ei {
                            for (r2, c2, beta) in ej {
                                h += alpha * beta * a[(*c2, *r1)] * a[(*c1, *r2)];
                            }
                        }
                        hess[(*vi, *vj)] += h.re;
                        if vi != vj {
                            hess[(*vj, *vi)] += h.re;
                        }
                    }
                }
            }
        }
        (grad, hess)
    }

    fn newton_direction(grad: &DVector<f64>, hess: DMatrix<f64>) -> Option<DVector<f64>> {
        let n = grad.len();
        let scale = (0..n).map(|i| hess[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
        let mut reg = 0.0;
        for _ in 0..12 {
            let mut h = hess.clone();
            if reg > 0.0 {
                for i in 0..n {
                    h[(i, i)] += reg;
                }
            }
            if let Some(chol) = Cholesky::new(h) {
                let d = chol.solve(&(-grad));
                if d.iter().all(|v| v.is_finite()) {
                    return Some(d);
                }
            }
            reg = if reg == 0.0 { 1e-14 * scale } else { reg * 100.0 };
        }
        None
    }

    fn max_linear_step(&self, x: &DVector<f64>, d: &DVector<f64>) -> f64 {
        let mut step = f64::INFINITY;
        for row in &self.linear {
            let rate = row.directional(d);
            if rate > 0.0 {
                step = step.min(row.slack(x) / rate);
            }
        }
        step
    }

    /// Minimizes the program starting from the strictly feasible `x0`.
    pub fn solve(&self, x0: DVector<f64>, settings: &BarrierSettings) -> BarrierResult {
        self.solve_until(x0, settings, |_| false)
    }

    /// Like [`solve`](Self::solve) but returns as soon as `stop(x)` holds
    /// after a centering step.
    pub fn solve_until(
        &self,
        x0: DVector<f64>,
        settings: &BarrierSettings,
        stop: impl Fn(&DVector<f64>) -> bool,
    ) -> BarrierResult {
        let value = |x: &DVector<f64>| self.objective.and_then(|o| o.value(x)).unwrap_or(0.0);
        if !self.is_strictly_feasible(&x0) {
            return BarrierResult {
                objective: value(&x0),
                x: x0,
                status: BarrierStatus::BadStart,
                gap: f64::INFINITY,
                newton_steps: 0,
            };
        }
        let nu = self.barrier_parameter().max(1.0);
        let mut x = x0;
        let mut t = settings.initial_t;
        let mut steps = 0usize;
        let status = loop {
            // centering
            let mut f = self.merit(&x, t).unwrap_or(f64::INFINITY);
            for _ in 0..80 {
                if steps >= settings.max_newton_steps {
                    break;
                }
                let (grad, hess) = self.derivatives(&x, t);
                let Some(d) = Self::newton_direction(&grad, hess) else { break };
                let decrement = -grad.dot(&d);
                steps += 1;
                if !(decrement > 1e-11) {
                    break;
                }
                let mut alpha = (0.99 * self.max_linear_step(&x, &d)).min(1.0);
                let mut accepted = false;
                while alpha > 1e-16 {
                    let trial = &x + &d * alpha;
                    if let Some(ft) = self.merit(&trial, t) {
                        if ft <= f - 0.25 * alpha * decrement {
                            x = trial;
                            f = ft;
                            accepted = true;
                            break;
                        }
                    }
                    alpha *= 0.5;
                }
                if !accepted || decrement < 1e-9 {
                    break;
                }
            }
            if stop(&x) {
                break BarrierStatus::Optimal;
            }
            if nu / t <= settings.gap_tolerance * value(&x).abs().max(1.0) {
                break BarrierStatus::Optimal;
            }
            if steps >= settings.max_newton_steps {
                break BarrierStatus::MaxIterations;
            }
            t *= settings.growth;
        };
        BarrierResult { objective: value(&x), x, status, gap: nu / t, newton_steps: steps }
    }

    /// Searches for a strictly feasible point by minimizing the largest
    /// violation `s` of the linear rows, starting from `x0` (which must
    /// already satisfy the quadratic rows and the matrix inequality strictly).
    /// `margin` is the violation (in row units) the returned point must beat.
    pub fn find_interior(&self, x0: &DVector<f64>, margin: f64, settings: &BarrierSettings) -> Option<DVector<f64>> {
        if self.is_strictly_feasible(x0) {
            return Some(x0.clone());
        }
        let n = self.num_vars;
        let worst = self
            .linear
            .iter()
            .map(|r| -r.slack(x0))
            .fold(f64::NEG_INFINITY, f64::max);
        let shift = worst.abs().max(1.0);
        let mut linear: Vec<LinearRow> = self
            .linear
            .iter()
            .map(|r| {
                let mut coeffs = r.coeffs.clone();
                coeffs.push((n, -1.0));
                LinearRow::new(coeffs, r.bound)
            })
            .collect();
        // keep the auxiliary variable bounded below
        linear.push(LinearRow::new(vec![(n, -1.0)], 2.0 * shift));
        let mut c = DVector::zeros(n + 1);
        c[n] = 1.0;
        let objective = LinearObjective(c);
        let lmi = self.lmi.clone().map(|mut l| {
            l.terms.retain(|(v, _)| *v < n);
            l
        });
        let aux = ConvexProgram {
            num_vars: n + 1,
            objective: Some(&objective),
            linear,
            quadratic: self.quadratic.clone(),
            lmi,
        };
        let mut start = x0.clone().insert_row(n, worst + shift);
        start[n] = worst + 0.5 * shift;
        let result = aux.solve_until(start, settings, |x| x[n] < -margin);
        let x = result.x.rows(0, n).into_owned();
        (result.x[n] < 0.0 && self.is_strictly_feasible(&x)).then_some(x)
    }
}
