//! Self-checks behind `irswpcn check`: identities and oracles evaluated on a
//! few small instances of the configured scenario.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ao::{fp_update_chi, fp_update_iota_ue, fp_update_iota_ul, solve_st, solve_ue, solve_ul, SolverConfig};
use crate::channel::{diag_form, ChannelRealization, DerivedChannel};
use crate::convex::sca_surrogate_qk;
use crate::harness::{build_instance, ExperimentConfig};
use crate::model::{uplink_sinr, ReflectionVector, SystemParams};
use crate::{CVector, Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }
}

/// Maximizer of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        }
    }
    0.5 * (lo + hi)
}

/// Optimal equal-weight sum throughput without any surface: with harvest
/// gains `c_k = eta P_A |h_d,k|^4 / sigma_z2^2`, slots proportional to `c_k`
/// give `w (T - tau0) log2(1 + sum c_k tau0 / (T - tau0))`, maximized over
/// `tau0` by golden section.
pub fn no_irs_optimum(params: &SystemParams, h_d: &[C64]) -> f64 {
    let w = params.weights[0];
    let c: f64 = h_d
        .iter()
        .map(|h| params.efficiency * params.hap_power * h.norm_sqr() * h.norm_sqr() / params.rx_noise_ul)
        .sum();
    let t = params.frame_time;
    let rate = |tau0: f64| {
        let rest = t - tau0;
        if rest <= 0.0 {
            0.0
        } else {
            w * rest * (1.0 + c * tau0 / rest).log2()
        }
    };
    rate(golden_section_max(rate, 0.0, t, 1e-12 * t))
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> ReflectionVector {
    ReflectionVector(CVector::from_fn(n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale))
}

fn sca_check(params: &SystemParams, derived: &DerivedChannel, rng: &mut ChaCha8Rng) -> CheckOutcome {
    let n = derived.num_elements();
    let (mut tangency, mut violation) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let dev = derived.device(rng.random_range(0..derived.num_devices()));
        let v = random_vector(rng, n, params.max_amplitude);
        let vh = random_vector(rng, n, params.max_amplitude);
        let exact = |x: &ReflectionVector| {
            params.hap_power * dev.link(x.as_vector()).norm_sqr() + params.irs_noise_dl * diag_form(dev.q2, x.as_vector())
        };
        let at_hat = sca_surrogate_qk(params, &dev, &vh, &vh);
        tangency = tangency.max((at_hat - exact(&vh)).abs() / exact(&vh).max(f64::MIN_POSITIVE));
        violation = violation.max((sca_surrogate_qk(params, &dev, &v, &vh) - exact(&v)) / exact(&v).max(f64::MIN_POSITIVE));
    }
    CheckOutcome::new(
        "sca_surrogate",
        tangency < 1e-12 && violation <= 1e-9,
        format!("max relative tangency error {tangency:.2e}, max relative bound excess {violation:.2e}"),
    )
}

fn fp_check(params: &SystemParams, derived: &DerivedChannel, rng: &mut ChaCha8Rng) -> Result<CheckOutcome> {
    let n = derived.num_elements();
    let mut worst_grad = 0.0f64;
    let mut worst_chi = 0.0f64;
    for dev in derived.devices() {
        let v = random_vector(rng, n, params.max_amplitude);
        let z = dev.link(v.as_vector());
        let d = params.irs_noise_ul * diag_form(dev.q1, v.as_vector()) + params.rx_noise_ul;
        let p = 1e-6 * rng.random_range(0.1..10.0);
        let chi = fp_update_chi(params, &dev, p, &v)?;
        let sinr = uplink_sinr(params, &dev, &v, p)?;
        worst_chi = worst_chi.max((chi - sinr).abs() / sinr.max(f64::MIN_POSITIVE));
        let s = (params.weights[0] * 0.3 * (1.0 + chi) * p).sqrt();
        let surrogates: [(C64, Box<dyn Fn(C64) -> f64>, f64); 2] = [
            (fp_update_iota_ue(params, &dev, &v)?, Box::new(move |i: C64| 2.0 * (i.conj() * z).re - i.norm_sqr() * d), 2.0 * z.norm()),
            (
                fp_update_iota_ul(params, &dev, params.weights[0], 0.3, p, chi, &v)?,
                Box::new(move |i: C64| 2.0 * s * (i.conj() * z).re - i.norm_sqr() * (p * z.norm_sqr() + d)),
                2.0 * s * z.norm(),
            ),
        ];
        for (iota, f, scale) in surrogates {
            let h = 1e-6 * iota.norm().max(f64::MIN_POSITIVE);
            let gr = (f(iota + C64::new(h, 0.0)) - f(iota - C64::new(h, 0.0))) / (2.0 * h);
            let gi = (f(iota + C64::new(0.0, h)) - f(iota - C64::new(0.0, h))) / (2.0 * h);
            worst_grad = worst_grad.max(gr.hypot(gi) / scale);
        }
    }
    Ok(CheckOutcome::new(
        "fp_updates",
        worst_grad < 1e-6 && worst_chi < 1e-12,
        format!("max relative surrogate gradient {worst_grad:.2e}, max chi/SINR mismatch {worst_chi:.2e}"),
    ))
}

fn solver_checks(config: &ExperimentConfig, instances: usize) -> Result<Vec<CheckOutcome>> {
    let value = config.sweep.grid[0];
    let amax = config.amax_db.first().copied().unwrap_or(0.0);
    let (mut monotone, mut feasible, mut ordered) = (0, 0, 0);
    for r in 0..instances as u64 {
        let inst = build_instance(config, value, amax, r)?;
        let ue = solve_ue(&inst.params, &inst.derived, &inst.solver)?;
        let ul = solve_ul(&inst.params, &inst.derived, &inst.solver)?;
        let st = solve_st(&inst.params, &inst.derived, &inst.solver)?;
        let sols = [&ue, &ul, &st];
        monotone += sols.iter().filter(|s| s.objective_trace.windows(2).all(|w| w[1] >= w[0] - 1e-8)).count();
        feasible += sols.iter().filter(|s| s.feasibility.feasible).count();
        if ue.objective + 1e-4 >= ul.objective && ul.objective + 1e-4 >= st.objective {
            ordered += 1;
        }
    }
    let total = 3 * instances;
    Ok(vec![
        CheckOutcome::new("ao_monotone", monotone == total, format!("{monotone}/{total} traces nondecreasing")),
        CheckOutcome::new("feasible_exit", feasible == total, format!("{feasible}/{total} solutions feasible")),
        CheckOutcome::new("setup_ordering", ordered == instances, format!("{ordered}/{instances} instances ordered UE >= UL >= ST")),
    ])
}

fn no_irs_check(config: &ExperimentConfig, instances: usize) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for r in 0..instances as u64 {
        let inst = build_instance(config, config.sweep.grid[0], config.amax_db.first().copied().unwrap_or(0.0), r)?;
        let mut params = inst.params.clone();
        params.weights = vec![1.0; params.num_devices()];
        let raw = &inst.derived.raw;
        let n = raw.num_elements();
        let blind = ChannelRealization::new(
            CVector::zeros(n),
            vec![CVector::zeros(n); raw.num_devices()],
            raw.h_d.clone(),
        )?;
        let derived = DerivedChannel::new(&blind)?;
        let oracle = no_irs_optimum(&params, &raw.h_d);
        let solver = SolverConfig { ..inst.solver.clone() };
        for sol in [solve_ue(&params, &derived, &solver)?, solve_ul(&params, &derived, &solver)?, solve_st(&params, &derived, &solver)?] {
            worst = worst.max((sol.objective - oracle).abs() / oracle);
        }
    }
    Ok(CheckOutcome::new("no_irs_reduction", worst < 1e-4, format!("max relative gap to the no-surface optimum {worst:.2e}")))
}

/// Runs every check on `instances` realizations of the first sweep point.
pub fn run_checks(config: &ExperimentConfig, instances: usize) -> Result<Vec<CheckOutcome>> {
    let inst = build_instance(config, config.sweep.grid[0], config.amax_db.first().copied().unwrap_or(0.0), 0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = vec![sca_check(&inst.params, &inst.derived, &mut rng), fp_check(&inst.params, &inst.derived, &mut rng)?];
    out.extend(solver_checks(config, instances)?);
    out.push(no_irs_check(config, instances)?);
    Ok(out)
}
