mod common;

use common::{effective_link, random_channel, rng};
use irswpcn::model::{
    check_feasibility, dl_amplify_power, harvested_energy, throughput, total_energy_consumption, ul_amplify_power,
    uplink_sinr, weighted_sum_throughput, EnergyMode, ProblemKind, ReflectionVector, Reflections, ResourceAllocation,
    SystemParams,
};
use irswpcn::units::{dbm_to_watts, watts_to_dbm};
use irswpcn::{CVector, C64};
use proptest::prelude::*;
use rand::Rng;

fn params(n: usize, k: usize) -> SystemParams {
    SystemParams {
        hap_power: 1.0,
        irs_power_budget: 2.0,
        irs_noise_dl: 0.05,
        irs_noise_ul: 0.05,
        rx_noise_ul: 0.1,
        max_amplitude: 3.0,
        weights: vec![1.0; k],
        num_elements: n,
        ..Default::default()
    }
}

fn random_vector<R: Rng>(r: &mut R, n: usize, amp: f64) -> ReflectionVector {
    ReflectionVector(CVector::from_fn(n, |_, _| C64::from_polar(amp * r.random::<f64>(), 6.3 * r.random::<f64>())))
}

#[test]
fn passive_energy_is_hap_energy_only() {
    let d = random_channel(&mut rng(1), 3, 2);
    let p = SystemParams { hap_power: 0.1, ..params(3, 2) };
    let alloc = ResourceAllocation::from_power(0.5, vec![0.2, 0.3], vec![0.01, 0.02]).unwrap();
    let refl = Reflections::Static { shared: random_vector(&mut rng(2), 3, 1.0) };
    let e = total_energy_consumption(&p, &d, &alloc, &refl, EnergyMode::Passive);
    assert!((e - 0.05).abs() < 1e-15);
    let zero = Reflections::Static { shared: ReflectionVector::zeros(3) };
    let active_zero = total_energy_consumption(&p, &d, &alloc, &zero, EnergyMode::Active);
    assert!((active_zero - 0.05).abs() < 1e-15);
    assert!(total_energy_consumption(&p, &d, &alloc, &refl, EnergyMode::Active) > e);
}

#[test]
fn active_energy_sums_both_phases() {
    let mut r = rng(3);
    let d = random_channel(&mut r, 4, 2);
    let p = params(4, 2);
    let v0 = random_vector(&mut r, 4, 1.0);
    let v = vec![random_vector(&mut r, 4, 1.0), random_vector(&mut r, 4, 1.0)];
    let alloc = ResourceAllocation::from_power(0.4, vec![0.25, 0.35], vec![0.3, 0.7]).unwrap();
    let refl = Reflections::UserAdaptive { downlink: v0.clone(), uplink: v.clone() };
    // recompute each amplifier term from raw channel entries
    let dl: f64 = (0..4)
        .map(|n| (p.hap_power * d.raw.g[n].norm_sqr() + p.irs_noise_dl) * v0.0[n].norm_sqr())
        .sum();
    let ul: f64 = (0..2)
        .map(|k| {
            let per: f64 = (0..4)
                .map(|n| (alloc.power[k] * d.raw.h_r[k][n].norm_sqr() + p.irs_noise_ul) * v[k].0[n].norm_sqr())
                .sum();
            alloc.tau[k] * per
        })
        .sum();
    let expected = p.hap_power * 0.4 + 0.4 * dl + ul;
    let got = total_energy_consumption(&p, &d, &alloc, &refl, EnergyMode::Active);
    assert!((got - expected).abs() < 1e-12 * expected);
}

#[test]
fn zero_surface_reduces_to_direct_link() {
    let mut r = rng(4);
    let d = random_channel(&mut r, 5, 3);
    let p = params(5, 3);
    let zero = ReflectionVector::zeros(5);
    for k in 0..3 {
        let dev = d.device(k);
        let h2 = d.raw.h_d[k].norm_sqr();
        let e = harvested_energy(&p, &dev, &zero, 0.7);
        assert!((e - 0.7 * p.efficiency * p.hap_power * h2).abs() < 1e-14);
        let s = uplink_sinr(&p, &dev, &zero, 0.3).unwrap();
        assert!((s - 0.3 * h2 / p.rx_noise_ul).abs() < 1e-12 * s);
        assert_eq!(ul_amplify_power(&p, &dev, &zero, 0.3), 0.0);
    }
    assert_eq!(dl_amplify_power(&p, &d, &zero), 0.0);
}

#[test]
fn feasibility_flags_each_constraint() {
    let mut r = rng(5);
    let d = random_channel(&mut r, 3, 2);
    let p = params(3, 2);
    let v = ReflectionVector(CVector::from_element(3, C64::new(0.3, 0.0)));
    let refl = Reflections::UplinkAdaptive { downlink: v.clone(), uplink: v.clone() };
    let ok = ResourceAllocation::from_power(0.5, vec![0.2, 0.2], vec![1e-3, 1e-3]).unwrap();
    assert!(check_feasibility(ProblemKind::UplinkAdaptive, &p, &d, &ok, &refl, 1e-6).unwrap().feasible);

    let greedy = ResourceAllocation::from_power(0.5, vec![0.2, 0.2], vec![1e3, 1e-3]).unwrap();
    let rep = check_feasibility(ProblemKind::UplinkAdaptive, &p, &d, &greedy, &refl, 1e-6).unwrap();
    assert!(!rep.feasible && rep.energy_causality[0] < 0.0 && rep.energy_causality[1] >= 0.0);

    let hot = ReflectionVector(CVector::from_element(3, C64::new(2.9, 0.0)));
    let loud = Reflections::UplinkAdaptive { downlink: hot, uplink: v.clone() };
    let rep = check_feasibility(ProblemKind::UplinkAdaptive, &p, &d, &ok, &loud, 1e-6).unwrap();
    assert!(rep.dl_amplify < 0.0 && !rep.feasible);

    let negative = ResourceAllocation::from_power(0.5, vec![-0.1, 0.2], vec![1e-3, 1e-3]).unwrap();
    let rep = check_feasibility(ProblemKind::UplinkAdaptive, &p, &d, &negative, &refl, 1e-6).unwrap();
    assert!(rep.nonnegativity < 0.0 && !rep.feasible);

    // the static setup also checks its vector against every uplink slot
    let big = ReflectionVector(CVector::from_element(3, C64::new(0.5, 0.0)));
    let p_tight = SystemParams { hap_power: 1e-6, irs_noise_dl: 0.0, irs_power_budget: 1e-3, ..p.clone() };
    let strong = ResourceAllocation::from_power(0.5, vec![0.2, 0.2], vec![1e-1, 1e-9]).unwrap();
    let rep = check_feasibility(ProblemKind::Static, &p_tight, &d, &strong, &Reflections::Static { shared: big }, 1e-6)
        .unwrap();
    assert!(rep.ul_amplify[0] < 0.0);
}

#[test]
fn passive_budget_is_never_binding() {
    let mut r = rng(6);
    let d = random_channel(&mut r, 3, 1);
    let p = SystemParams { irs_power_budget: f64::INFINITY, max_amplitude: 1.0, ..params(3, 1) };
    let v = ReflectionVector(CVector::from_element(3, C64::new(1.0, 0.0)));
    let alloc = ResourceAllocation::from_power(0.5, vec![0.5], vec![1e-6]).unwrap();
    let rep = check_feasibility(ProblemKind::Static, &p, &d, &alloc, &Reflections::Static { shared: v }, 1e-6).unwrap();
    assert!(rep.feasible);
    assert!(rep.dl_amplify.is_infinite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn throughput_monotone_in_power_and_time(seed in 0u64..5000, p1 in 0.0..2.0f64, dp in 0.0..2.0f64, t1 in 0.0..1.0f64, dt in 0.0..1.0f64) {
        let mut r = rng(seed);
        let d = random_channel(&mut r, 4, 1);
        let p = params(4, 1);
        let v = random_vector(&mut r, 4, 2.0);
        let dev = d.device(0);
        let base = throughput(&p, &dev, t1, p1, &v).unwrap();
        prop_assert!(throughput(&p, &dev, t1, p1 + dp, &v).unwrap() >= base - 1e-14);
        prop_assert!(throughput(&p, &dev, t1 + dt, p1, &v).unwrap() >= base - 1e-14);
    }

    #[test]
    fn quantities_match_raw_recomputation(seed in 0u64..5000, tau0 in 0.0..1.0f64, power in 0.0..1.0f64) {
        let mut r = rng(seed);
        let d = random_channel(&mut r, 5, 2);
        let p = params(5, 2);
        let v = random_vector(&mut r, 5, 2.0);
        for k in 0..2 {
            let z = effective_link(&d.raw, k, &v.0).norm_sqr();
            let q2: f64 = (0..5).map(|n| d.raw.h_r[k][n].norm_sqr() * v.0[n].norm_sqr()).sum();
            let q1: f64 = (0..5).map(|n| d.raw.g[n].norm_sqr() * v.0[n].norm_sqr()).sum();
            let e = tau0 * p.efficiency * (p.hap_power * z + p.irs_noise_dl * q2);
            prop_assert!((harvested_energy(&p, &d.device(k), &v, tau0) - e).abs() <= 1e-12 * e.max(1e-300));
            let s = power * z / (p.irs_noise_ul * q1 + p.rx_noise_ul);
            prop_assert!((uplink_sinr(&p, &d.device(k), &v, power).unwrap() - s).abs() <= 1e-12 * s.max(1e-300));
        }
    }

    #[test]
    fn feasible_points_respect_budgets(seed in 0u64..5000, tau0 in 0.05..0.9f64, amp in 0.0..3.0f64, frac in 0.0..1.2f64) {
        let mut r = rng(seed);
        let d = random_channel(&mut r, 4, 2);
        let p = params(4, 2);
        let v0 = random_vector(&mut r, 4, amp);
        let v1 = random_vector(&mut r, 4, amp);
        let rest = (1.0 - tau0) / 2.0;
        let power: Vec<f64> = (0..2)
            .map(|k| frac * harvested_energy(&p, &d.device(k), &v0, tau0) / rest)
            .collect();
        let alloc = ResourceAllocation::from_power(tau0, vec![rest; 2], power).unwrap();
        let refl = Reflections::UplinkAdaptive { downlink: v0.clone(), uplink: v1.clone() };
        let rep = check_feasibility(ProblemKind::UplinkAdaptive, &p, &d, &alloc, &refl, 1e-6).unwrap();
        if rep.feasible {
            prop_assert!(dl_amplify_power(&p, &d, &v0) <= p.irs_power_budget * (1.0 + 1e-6));
            for k in 0..2 {
                prop_assert!(ul_amplify_power(&p, &d.device(k), &v1, alloc.power[k]) <= p.irs_power_budget * (1.0 + 1e-6));
                let spent = alloc.power[k] * alloc.tau[k];
                prop_assert!(spent <= harvested_energy(&p, &d.device(k), &v0, tau0) * (1.0 + 1e-6));
            }
        }
        let wst = weighted_sum_throughput(&p, &d, &alloc, &refl).unwrap();
        prop_assert!(wst >= 0.0);
    }

    #[test]
    fn dbm_round_trip(dbm in -120.0..60.0f64) {
        prop_assert!((watts_to_dbm(dbm_to_watts(dbm)) - dbm).abs() <= 1e-12 * dbm.abs().max(1.0));
    }
}
