//! Rank-one recovery from the lifted downlink matrix.

use nalgebra::SymmetricEigen;
use rand::Rng;
use rand_distr::StandardNormal;

use super::sdp::SdpLiftVariable;
use crate::channel::DerivedChannel;
use crate::model::{dl_amplify_power, harvest_rate, ReflectionVector, SystemParams};
use crate::{CMatrix, CVector, Error, Result, C64};

#[derive(Debug, Clone)]
pub struct RandomizationOutcome {
    pub v: ReflectionVector,
    /// Smallest ratio, over devices, of the harvest rate at `v` to the rate
    /// promised by the relaxation.
    pub score: f64,
    /// Index of the winning candidate; `0` is the principal eigenvector.
    pub candidate: usize,
}

/// Eigenvalue ratio below which the lifted matrix counts as rank one.
const RANK_ONE_RATIO: f64 = 1e-9;

/// Draws `num_candidates` vectors from `CN(0, W0 / tau0)`, maps each to the
/// reflection domain by dividing through its last entry, rescales it onto the
/// downlink amplifying-power budget and amplitude caps, and keeps the
/// candidate whose worst per-device harvest ratio is largest. The principal
/// eigenvector is always the first candidate, so adding draws never lowers
/// the score.
pub fn gaussian_randomization<R: Rng + ?Sized>(
    params: &SystemParams,
    derived: &DerivedChannel,
    lift: &SdpLiftVariable,
    num_candidates: usize,
    rng: &mut R,
) -> Result<RandomizationOutcome> {
    let n = derived.num_elements();
    if lift.w.nrows() != n + 1 || lift.w.ncols() != n + 1 {
        return Err(Error::Dimension("lifted matrix must be (N+1)x(N+1)".into()));
    }
    if !(lift.tau0 > 0.0) {
        return Err(Error::InvalidParameter("randomization needs tau0 > 0".into()));
    }
    let cov: CMatrix = &lift.w / C64::new(lift.tau0, 0.0);
    let cov = (&cov + cov.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(cov.clone());
    let mut order: Vec<usize> = (0..n + 1).collect();
    order.sort_by(|a, b| eig.eigenvalues[*b].total_cmp(&eig.eigenvalues[*a]));
    let lead = eig.eigenvalues[order[0]].max(0.0);
    let second = order.get(1).map_or(0.0, |&i| eig.eigenvalues[i].max(0.0));

    let relaxed: Vec<f64> = derived
        .devices()
        .enumerate()
        .map(|(k, dev)| {
            let b = derived.lifted_gram(k);
            let lifted = (&b * &cov).trace().re;
            let noise: f64 = (0..n).map(|i| dev.q2[i] * cov[(i, i)].re).sum();
            params.efficiency * (params.hap_power * lifted + params.irs_noise_dl * noise)
        })
        .collect();
    let score = |v: &ReflectionVector| -> f64 {
        let mut worst = f64::INFINITY;
        let mut total = 0.0;
        for (k, dev) in derived.devices().enumerate() {
            let h = harvest_rate(params, &dev, v);
            total += h;
            if relaxed[k] > 0.0 {
                worst = worst.min(h / relaxed[k]);
            }
        }
        if worst.is_finite() {
            worst
        } else {
            total
        }
    };
    let to_candidate = |xi: &CVector| -> Option<ReflectionVector> {
        let last = xi[n];
        if last.norm() == 0.0 {
            return None;
        }
        let v = ReflectionVector(CVector::from_fn(n, |i, _| xi[i] / last));
        let s = feasible_scale(params, derived, &v);
        let v = v.scaled(s);
        v.0.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(v)
    };

    let u = eig.eigenvectors.column(order[0]).into_owned() * C64::new(lead.sqrt(), 0.0);
    let mut best: Option<(ReflectionVector, f64, usize)> = to_candidate(&u).map(|v| {
        let s = score(&v);
        (v, s, 0)
    });
    if lead > 0.0 && second <= RANK_ONE_RATIO * lead {
        if let Some((v, s, c)) = best {
            return Ok(RandomizationOutcome { v, score: s, candidate: c });
        }
    }

    // factor cov = L L^H through its eigenpairs (robust to rank deficiency)
    let factor = CMatrix::from_fn(n + 1, n + 1, |r, c| {
        eig.eigenvectors[(r, c)] * eig.eigenvalues[c].max(0.0).sqrt()
    });
    let half = std::f64::consts::FRAC_1_SQRT_2;
    for draw in 1..=num_candidates {
        let z = CVector::from_fn(n + 1, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re * half, im * half)
        });
        let xi = &factor * z;
        if let Some(v) = to_candidate(&xi) {
            let s = score(&v);
            if s.is_finite() && best.as_ref().is_none_or(|(_, b, _)| s > *b) {
                best = Some((v, s, draw));
            }
        }
    }
    match best {
        Some((v, s, c)) if s.is_finite() => Ok(RandomizationOutcome { v, score: s, candidate: c }),
        _ => Err(Error::NoFeasibleCandidate {
            best_score: f64::NAN,
            best: Box::new(ReflectionVector::zeros(n)),
        }),
    }
}

/// Largest `s <= 1` with `s v` inside the downlink amplifying-power budget
/// and the amplitude caps.
pub(crate) fn feasible_scale(params: &SystemParams, derived: &DerivedChannel, v: &ReflectionVector) -> f64 {
    let mut s: f64 = 1.0;
    let peak = v.max_amplitude();
    if peak > params.max_amplitude {
        s = s.min(params.max_amplitude / peak);
    }
    if params.has_power_budget() {
        let used = dl_amplify_power(params, derived, v);
        if used > params.irs_power_budget {
            s = s.min((params.irs_power_budget / used).sqrt());
        }
    }
    // guard against rounding pushing the scaled point over a cap
    if s < 1.0 {
        s *= 1.0 - 1e-12;
    }
    s
}
