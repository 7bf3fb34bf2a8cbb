use super::{ReflectionVector, Reflections, ResourceAllocation, SystemParams};
use crate::channel::{DerivedChannel, DeviceView};
use crate::{Error, Result};

use crate::channel::diag_form;

/// Harvested power per second of downlink (W):
/// `eta (P_A |h_d^H + b^H v0|^2 + sigma_n1^2 v0^H Q2 v0)`.
pub fn harvest_rate(params: &SystemParams, dev: &DeviceView<'_>, v0: &ReflectionVector) -> f64 {
    let v = v0.as_vector();
    params.efficiency * (params.hap_power * dev.link(v).norm_sqr() + params.irs_noise_dl * diag_form(dev.q2, v))
}

/// Energy harvested by a device during a downlink phase of `tau0` seconds.
pub fn harvested_energy(params: &SystemParams, dev: &DeviceView<'_>, v0: &ReflectionVector, tau0: f64) -> f64 {
    tau0 * harvest_rate(params, dev, v0)
}

/// SINR per Watt of transmit power,
/// `|h_d^H + b^H v|^2 / (sigma_n2^2 v^H Q1 v + sigma_z2^2)`.
pub fn sinr_gain(params: &SystemParams, dev: &DeviceView<'_>, v: &ReflectionVector) -> Result<f64> {
    let v = v.as_vector();
    let denom = params.irs_noise_ul * diag_form(dev.q1, v) + params.rx_noise_ul;
    if denom <= 0.0 {
        return Err(Error::DivisionByZero("uplink noise power is zero"));
    }
    Ok(dev.link(v).norm_sqr() / denom)
}

pub fn uplink_sinr(params: &SystemParams, dev: &DeviceView<'_>, v: &ReflectionVector, power: f64) -> Result<f64> {
    Ok(power * sinr_gain(params, dev, v)?)
}

/// `tau log2(1 + SINR)` in bits/Hz; zero for an empty slot.
pub fn throughput(
    params: &SystemParams,
    dev: &DeviceView<'_>,
    tau: f64,
    power: f64,
    v: &ReflectionVector,
) -> Result<f64> {
    if tau == 0.0 {
        return Ok(0.0);
    }
    Ok(tau * (1.0 + uplink_sinr(params, dev, v, power)?).log2())
}

pub fn weighted_sum_throughput(
    params: &SystemParams,
    derived: &DerivedChannel,
    alloc: &ResourceAllocation,
    reflections: &Reflections,
) -> Result<f64> {
    let k = derived.num_devices();
    if alloc.num_devices() != k || params.weights.len() != k {
        return Err(Error::Dimension("allocation/weights do not match device count".into()));
    }
    reflections.validate(derived.num_elements(), k)?;
    derived
        .devices()
        .enumerate()
        .map(|(i, dev)| {
            Ok(params.weights[i] * throughput(params, &dev, alloc.tau[i], alloc.power[i], reflections.uplink(i))?)
        })
        .sum()
}

/// Downlink amplifying power `P_A v0^H Q1 v0 + sigma_n1^2 v0^H v0`.
pub fn dl_amplify_power(params: &SystemParams, derived: &DerivedChannel, v0: &ReflectionVector) -> f64 {
    let v = v0.as_vector();
    params.hap_power * diag_form(&derived.q1, v) + params.irs_noise_dl * v.norm_squared()
}

/// Uplink amplifying power during device `k`'s slot,
/// `p_k v^H Q2,k v + sigma_n2^2 v^H v`.
pub fn ul_amplify_power(params: &SystemParams, dev: &DeviceView<'_>, v: &ReflectionVector, power: f64) -> f64 {
    let v = v.as_vector();
    power * diag_form(dev.q2, v) + params.irs_noise_ul * v.norm_squared()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyMode {
    Active,
    Passive,
}

/// Total energy spent in one frame. A passive surface only costs the HAP's
/// `P_A tau0`; an active one adds the amplifier power of both phases.
pub fn total_energy_consumption(
    params: &SystemParams,
    derived: &DerivedChannel,
    alloc: &ResourceAllocation,
    reflections: &Reflections,
    mode: EnergyMode,
) -> f64 {
    let hap = params.hap_power * alloc.tau0;
    match mode {
        EnergyMode::Passive => hap,
        EnergyMode::Active => {
            let dl = alloc.tau0 * dl_amplify_power(params, derived, reflections.downlink());
            let ul: f64 = derived
                .devices()
                .enumerate()
                .map(|(k, dev)| alloc.tau[k] * ul_amplify_power(params, &dev, reflections.uplink(k), alloc.power[k]))
                .sum();
            hap + dl + ul
        }
    }
}
