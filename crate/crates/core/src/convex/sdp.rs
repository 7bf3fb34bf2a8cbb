//! Rank-relaxed time/power program over the lifted downlink matrix
//! `W0 = tau0 [v0; 1][v0; 1]^H`.

use nalgebra::DVector;

use super::allocation_block::{rate_objective_bits, AllocationBlock};
use super::barrier::{BarrierSettings, ConvexProgram, HermitianLmi, LinearRow};
use super::{ConvexSolveResult, SolveStatus};
use crate::channel::DerivedChannel;
use crate::model::{ReflectionVector, ResourceAllocation, SystemParams};
use crate::{CMatrix, Error, Result, C64};

/// Lifted downlink variable; `w[(N, N)] = tau0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpLiftVariable {
    pub w: CMatrix,
    pub tau0: f64,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub allocation: ResourceAllocation,
    pub lift: SdpLiftVariable,
}

/// Real coordinates of a Hermitian `dim x dim` matrix: the diagonal first,
/// then `(Re, Im)` of each strictly upper entry in row-major order.
pub(crate) struct HermitianCoords {
    pub dim: usize,
    pub offset: usize,
}

impl HermitianCoords {
    pub fn len(&self) -> usize {
        self.dim * self.dim
    }

    pub fn diag(&self, i: usize) -> usize {
        self.offset + i
    }

    pub fn off(&self, i: usize, j: usize) -> (usize, usize) {
        debug_assert!(i < j);
        let before = i * self.dim - i * (i + 1) / 2 + (j - i - 1);
        let base = self.offset + self.dim + 2 * before;
        (base, base + 1)
    }

    pub fn lmi(&self) -> HermitianLmi {
        let one = C64::new(1.0, 0.0);
        let j = C64::new(0.0, 1.0);
        let mut terms = Vec::with_capacity(self.len());
        for i in 0..self.dim {
            terms.push((self.diag(i), vec![(i, i, one)]));
        }
        for r in 0..self.dim {
            for c in r + 1..self.dim {
                let (re, im) = self.off(r, c);
                terms.push((re, vec![(r, c, one), (c, r, one)]));
                terms.push((im, vec![(r, c, j), (c, r, -j)]));
            }
        }
        HermitianLmi { dim: self.dim, constant: CMatrix::zeros(self.dim, self.dim), terms }
    }

    /// Coefficients of `Re Tr(C X)` for Hermitian `C`, scaled by `scale`.
    pub fn trace_coeffs(&self, c: &CMatrix, scale: f64) -> Vec<(usize, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.dim {
            if c[(i, i)].re != 0.0 {
                out.push((self.diag(i), scale * c[(i, i)].re));
            }
        }
        for r in 0..self.dim {
            for col in r + 1..self.dim {
                let z = c[(col, r)];
                let (re, im) = self.off(r, col);
                out.push((re, 2.0 * scale * z.re));
                out.push((im, -2.0 * scale * z.im));
            }
        }
        out
    }

    pub fn matrix(&self, x: &DVector<f64>) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            m[(i, i)] = C64::new(x[self.diag(i)], 0.0);
        }
        for r in 0..self.dim {
            for c in r + 1..self.dim {
                let (re, im) = self.off(r, c);
                m[(r, c)] = C64::new(x[re], x[im]);
                m[(c, r)] = C64::new(x[re], -x[im]);
            }
        }
        m
    }
}

/// Per-element scale `s_n` that makes the lifted variable O(1): the amplitude
/// at which each element alone would use `1/N` of the amplifier budget.
pub(crate) fn element_scales(params: &SystemParams, derived: &DerivedChannel) -> Vec<f64> {
    let n = derived.num_elements();
    derived
        .q1
        .iter()
        .map(|q| {
            let per = params.hap_power * q + params.irs_noise_dl;
            let s = if params.has_power_budget() && per > 0.0 {
                (params.irs_power_budget / (n as f64 * per)).sqrt().min(params.max_amplitude)
            } else {
                params.max_amplitude
            };
            if s > 0.0 && s.is_finite() {
                s
            } else {
                params.max_amplitude
            }
        })
        .collect()
}

/// Maximizes `sum w_k tau_k log2(1 + gamma_k f_k / tau_k)` over `W0 >= 0`,
/// `tau_k` and `f_k` with the rank-one constraint dropped. `uplink[k]` is the
/// vector device `k` uses in its slot (constant here).
pub fn solve_time_power_sdp(
    params: &SystemParams,
    derived: &DerivedChannel,
    gains: &[f64],
    uplink: &[ReflectionVector],
    settings: &BarrierSettings,
) -> Result<ConvexSolveResult<SdpSolution>> {
    params.validate()?;
    let n = derived.num_elements();
    let k_count = derived.num_devices();
    if gains.len() != k_count || uplink.len() != k_count || params.num_devices() != k_count {
        return Err(Error::Dimension("gains/uplink vectors do not match device count".into()));
    }
    if gains.iter().any(|g| !(*g >= 0.0)) {
        return Err(Error::InvalidParameter("SINR gains must be nonnegative".into()));
    }
    let scales = element_scales(params, derived);
    let dim = n + 1;
    let coords = HermitianCoords { dim, offset: 0 };
    let tau0 = coords.diag(n);
    let scaled = |k: usize| {
        let t = &derived.t[k];
        DVector::from_fn(dim, |i, _| if i < n { t[i] * scales[i] } else { t[i] })
    };

    // energy unit: harvest rate over one second at the reference point where
    // every element sits at its scale and all terms add coherently
    let eta = params.efficiency;
    let f_scale: Vec<f64> = (0..k_count)
        .map(|k| {
            let t = scaled(k);
            let coherent: f64 = t.iter().map(|z| z.norm()).sum();
            let noise: f64 = (0..n).map(|i| derived.q2[k][i] * scales[i] * scales[i]).sum();
            eta * (params.hap_power * coherent * coherent + params.irs_noise_dl * noise)
        })
        .collect();
    let block = AllocationBlock::new(params, gains, &f_scale, uplink, coords.len());
    let num_vars = coords.len() + block.num_vars();

    let mut linear: Vec<LinearRow> = Vec::new();
    // energy causality on the lifted form; the noise terms of the last
    // diagonal entry appear on both sides and cancel
    for &(k, _, f, s) in &block.active {
        let t = scaled(k);
        let gram = &t * t.adjoint();
        let mut coeffs = coords.trace_coeffs(&gram, -eta * params.hap_power / s);
        for i in 0..n {
            let c = eta * params.irs_noise_dl * derived.q2[k][i] * scales[i] * scales[i] / s;
            if c != 0.0 {
                coeffs.push((coords.diag(i), -c));
            }
        }
        coeffs.push((f, 1.0));
        linear.push(LinearRow::new(coeffs, 0.0));
    }
    if params.has_power_budget() {
        let pf = params.irs_power_budget;
        let mut coeffs: Vec<(usize, f64)> = (0..n)
            .map(|i| {
                let per = params.hap_power * derived.q1[i] + params.irs_noise_dl;
                (coords.diag(i), per * scales[i] * scales[i] / pf)
            })
            .collect();
        coeffs.push((tau0, -1.0));
        linear.push(LinearRow::new(coeffs, 0.0));
    }
    for i in 0..n {
        let r = scales[i] / params.max_amplitude;
        linear.push(LinearRow::new(vec![(coords.diag(i), r * r), (tau0, -1.0)], 0.0));
    }
    linear.extend(block.rows(params, derived, uplink, tau0));

    let objective = block.objective(params, gains);
    let program = ConvexProgram {
        num_vars,
        objective: Some(&objective),
        linear,
        quadratic: Vec::new(),
        lmi: Some(coords.lmi()),
    };

    let mut x0 = DVector::zeros(num_vars);
    let t0 = 0.5 * params.frame_time;
    x0[tau0] = t0;
    for i in 0..n {
        let r = params.max_amplitude / scales[i];
        x0[coords.diag(i)] = 0.5 * t0 * (r * r).min(1.0);
    }
    let f_max: Vec<f64> = (0..k_count)
        .map(|k| {
            let t = scaled(k);
            let diag: f64 = (0..dim).map(|i| t[i].norm_sqr() * x0[coords.diag(i)]).sum();
            let noise: f64 = (0..n).map(|i| derived.q2[k][i] * scales[i] * scales[i] * x0[coords.diag(i)]).sum();
            eta * (params.hap_power * diag + params.irs_noise_dl * noise) / f_scale[k]
        })
        .collect();
    block.start(params, derived, uplink, &f_max, &mut x0);

    let (x, status, gap) = if block.active.is_empty() {
        (x0, SolveStatus::Optimal, 0.0)
    } else {
        let r = program.solve(x0, settings);
        (r.x, r.status.into(), r.gap)
    };

    let w_scaled = coords.matrix(&x);
    let w = CMatrix::from_fn(dim, dim, |r, c| {
        let sr = if r < n { scales[r] } else { 1.0 };
        let sc = if c < n { scales[c] } else { 1.0 };
        w_scaled[(r, c)] * (sr * sc)
    });
    let tau0_value = x[tau0].max(0.0);
    let allocation = block.extract(tau0_value, &x);
    let objective = rate_objective_bits(params, gains, &allocation);
    Ok(ConvexSolveResult {
        value: SdpSolution { allocation, lift: SdpLiftVariable { w, tau0: tau0_value } },
        objective,
        status,
        tolerance: gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_cover_matrix_once() {
        let c = HermitianCoords { dim: 4, offset: 3 };
        let mut seen = vec![false; c.len()];
        for i in 0..4 {
            seen[c.diag(i) - 3] = true;
            for j in i + 1..4 {
                let (a, b) = c.off(i, j);
                assert!(!seen[a - 3] && !seen[b - 3]);
                seen[a - 3] = true;
                seen[b - 3] = true;
            }
        }
        assert!(seen.iter().all(|s| *s));
    }

    #[test]
    fn trace_coefficients_match_trace() {
        let coords = HermitianCoords { dim: 3, offset: 0 };
        let x = DVector::from_fn(9, |i, _| (i as f64 * 0.37).sin());
        let m = coords.matrix(&x);
        let t = crate::CVector::from_fn(3, |i, _| C64::new(1.0 + i as f64, 0.5 - i as f64));
        let gram = &t * t.adjoint();
        let direct = (&gram * &m).trace().re;
        let via: f64 = coords.trace_coeffs(&gram, 1.0).iter().map(|(i, c)| c * x[*i]).sum();
        assert!((direct - via).abs() < 1e-12);
    }
}
