//! Shared fixtures and independent numeric oracles for the integration tests.
//!
//! Nothing here calls into the crate's own optimizers; the oracles recompute
//! quantities from raw channel entries.

#![allow(dead_code)]

use irswpcn::channel::{ChannelRealization, DerivedChannel};
use irswpcn::harness::{build_instance, ExperimentConfig, Instance};
use irswpcn::{CVector, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cn<R: Rng>(rng: &mut R, std: f64) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * (std * std::f64::consts::FRAC_1_SQRT_2)
}

pub fn cn_vector<R: Rng>(rng: &mut R, n: usize, std: f64) -> CVector {
    CVector::from_fn(n, |_, _| cn(rng, std))
}

/// Unit-scale i.i.d. complex Gaussian channels.
pub fn random_channel<R: Rng>(rng: &mut R, n: usize, k: usize) -> DerivedChannel {
    let g = cn_vector(rng, n, 1.0);
    let h_r = (0..k).map(|_| cn_vector(rng, n, 1.0)).collect();
    let h_d = (0..k).map(|_| cn(rng, 1.0)).collect();
    DerivedChannel::new(&ChannelRealization::new(g, h_r, h_d).unwrap()).unwrap()
}

/// Default experiment geometry and parameters, P_A = 20 dBm.
pub fn default_instance(realization: u64, amax_db: f64) -> Instance {
    build_instance(&ExperimentConfig::default(), 20.0, amax_db, realization).unwrap()
}

/// `conj(h_d) + sum_n conj(h_r[n] conj(g[n])) v_n`, from raw entries only.
pub fn effective_link(raw: &ChannelRealization, k: usize, v: &CVector) -> C64 {
    let mut z = raw.h_d[k].conj();
    for n in 0..raw.g.len() {
        z += (raw.h_r[k][n] * raw.g[n].conj()).conj() * v[n];
    }
    z
}

/// Golden-section maximizer of a unimodal function.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Dense grid maximum over a box, refined twice around the incumbent.
pub fn grid_max_2d(f: impl Fn(f64, f64) -> f64, x: (f64, f64), y: (f64, f64), points: usize) -> (f64, f64, f64) {
    let (mut xl, mut xh, mut yl, mut yh) = (x.0, x.1, y.0, y.1);
    let mut best = (f64::NEG_INFINITY, xl, yl);
    for _ in 0..3 {
        for i in 0..=points {
            for j in 0..=points {
                let a = xl + (xh - xl) * i as f64 / points as f64;
                let b = yl + (yh - yl) * j as f64 / points as f64;
                let v = f(a, b);
                if v > best.0 {
                    best = (v, a, b);
                }
            }
        }
        let (dx, dy) = (4.0 * (xh - xl) / points as f64, 4.0 * (yh - yl) / points as f64);
        xl = (best.1 - dx).max(x.0);
        xh = (best.1 + dx).min(x.1);
        yl = (best.2 - dy).max(y.0);
        yh = (best.2 + dy).min(y.1);
    }
    best
}

/// Central finite difference.
pub fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Downlink harvesting problem for one device in polar coordinates:
/// maximize `P_A |c + sum d_n a_n e^{j th_n}|^2 + s1 sum q_n a_n^2` subject to
/// `sum w_n a_n^2 <= budget` and `0 <= a_n <= a_max`.
pub struct HarvestProblem {
    pub c: C64,
    pub d: Vec<C64>,
    pub q: Vec<f64>,
    pub w: Vec<f64>,
    pub hap_power: f64,
    pub noise: f64,
    pub budget: f64,
    pub a_max: f64,
}

impl HarvestProblem {
    pub fn value(&self, a: &[f64], th: &[f64]) -> f64 {
        let z = self.link(a, th);
        let noise: f64 = a.iter().zip(&self.q).map(|(a, q)| q * a * a).sum();
        self.hap_power * z.norm_sqr() + self.noise * noise
    }

    fn link(&self, a: &[f64], th: &[f64]) -> C64 {
        let mut z = self.c;
        for n in 0..a.len() {
            z += self.d[n] * C64::from_polar(a[n], th[n]);
        }
        z
    }

    fn gradient(&self, a: &[f64], th: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let z = self.link(a, th);
        let mut ga = vec![0.0; a.len()];
        let mut gt = vec![0.0; a.len()];
        for n in 0..a.len() {
            let e = z.conj() * self.d[n] * C64::from_polar(1.0, th[n]);
            ga[n] = 2.0 * self.hap_power * e.re + 2.0 * self.noise * self.q[n] * a[n];
            gt[n] = -2.0 * self.hap_power * a[n] * e.im;
        }
        (ga, gt)
    }

    /// Euclidean projection onto the weighted ball intersected with the box.
    pub fn project(&self, y: &[f64]) -> Vec<f64> {
        let clip = |lam: f64| -> Vec<f64> {
            y.iter().zip(&self.w).map(|(y, w)| (y / (1.0 + lam * w)).clamp(0.0, self.a_max)).collect()
        };
        let load = |a: &[f64]| a.iter().zip(&self.w).map(|(a, w)| w * a * a).sum::<f64>();
        let a0 = clip(0.0);
        if load(&a0) <= self.budget {
            return a0;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        while load(&clip(hi)) > self.budget {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if load(&clip(mid)) > self.budget {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        clip(hi)
    }

    /// Projected gradient ascent over `(a, theta)` with backtracking.
    pub fn projected_gradient(&self, a0: &[f64], th0: &[f64], iters: usize) -> (f64, Vec<f64>, Vec<f64>) {
        let mut a = self.project(a0);
        let mut th = th0.to_vec();
        let mut f = self.value(&a, &th);
        let mut step = 1.0;
        for _ in 0..iters {
            let (ga, gt) = self.gradient(&a, &th);
            let mut accepted = false;
            for _ in 0..60 {
                let ya: Vec<f64> = a.iter().zip(&ga).map(|(a, g)| a + step * g).collect();
                let na = self.project(&ya);
                let nt: Vec<f64> = th.iter().zip(&gt).map(|(t, g)| t + step * g).collect();
                let nf = self.value(&na, &nt);
                if nf > f {
                    accepted = nf - f > 1e-15 * f.abs();
                    a = na;
                    th = nt;
                    f = nf;
                    step *= 2.0;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        (f, a, th)
    }
}
