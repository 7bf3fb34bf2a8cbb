use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::derived::ChannelRealization;
use super::geometry::{distance, Positions};
use super::{LinkStream, RealizationSeed};
use crate::{CVector, Error, Result, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingConfig {
    /// Exponent of the HAP-IRS and IRS-device links.
    pub pathloss_exponent_irs: f64,
    /// Exponent of the direct HAP-device links.
    pub pathloss_exponent_direct: f64,
    /// Linear Rician factor of the IRS links; `inf` gives pure line of sight.
    pub rician_factor: f64,
    pub reference_gain_db: f64,
    pub reference_distance: f64,
}

impl Default for FadingConfig {
    fn default() -> Self {
        Self {
            pathloss_exponent_irs: 2.2,
            pathloss_exponent_direct: 3.5,
            rician_factor: 10.0,
            reference_gain_db: -30.0,
            reference_distance: 1.0,
        }
    }
}

impl FadingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.pathloss_exponent_irs >= 0.0 && self.pathloss_exponent_direct >= 0.0) {
            return Err(Error::InvalidParameter("path-loss exponents must be >= 0".into()));
        }
        if !(self.rician_factor >= 0.0) {
            return Err(Error::InvalidParameter("rician_factor must be >= 0".into()));
        }
        if !(self.reference_distance > 0.0) || !self.reference_gain_db.is_finite() {
            return Err(Error::InvalidParameter(
                "reference distance must be > 0 and reference gain finite".into(),
            ));
        }
        Ok(())
    }
}

/// Linear power gain `G0 * (d / d0)^(-exponent)` with `G0` the reference gain.
pub fn path_loss(distance: f64, fading: &FadingConfig, exponent: f64) -> Result<f64> {
    if !(distance >= fading.reference_distance) {
        return Err(Error::BelowReferenceDistance {
            distance,
            reference: fading.reference_distance,
        });
    }
    let g0 = crate::units::db_to_linear(fading.reference_gain_db);
    Ok(g0 * (distance / fading.reference_distance).powf(-exponent))
}

fn circular_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Half-wavelength ULA along the x axis, seen from the IRS towards `other`.
fn steering(irs: &[f64; 3], other: &[f64; 3], n: usize) -> CVector {
    let d = distance(irs, other);
    let cos_psi = if d > 0.0 { (other[0] - irs[0]) / d } else { 0.0 };
    CVector::from_fn(n, |i, _| C64::from_polar(1.0, -std::f64::consts::PI * i as f64 * cos_psi))
}

fn rician<R: Rng + ?Sized>(los: &CVector, gain: f64, factor: f64, rng: &mut R) -> CVector {
    let scale = gain.sqrt();
    if factor.is_infinite() {
        return los * C64::from(scale);
    }
    let los_w = (factor / (1.0 + factor)).sqrt();
    let nlos_w = (1.0 / (1.0 + factor)).sqrt();
    CVector::from_fn(los.len(), |i, _| {
        (los[i] * los_w + circular_normal(rng) * nlos_w) * scale
    })
}

/// Samples `g`, `h_r,k` (Rician) and `h_d,k` (Rayleigh) for one realization.
/// Each link family draws from its own stream of `seed`.
pub fn sample_channels(
    positions: &Positions,
    num_elements: usize,
    fading: &FadingConfig,
    seed: RealizationSeed,
) -> Result<ChannelRealization> {
    fading.validate()?;
    if num_elements == 0 {
        return Err(Error::InvalidParameter("IRS needs at least one element".into()));
    }
    let irs = &positions.irs;

    let mut rng = seed.stream(LinkStream::HapIrs);
    let pl = path_loss(distance(&positions.hap, irs), fading, fading.pathloss_exponent_irs)?;
    let g = rician(&steering(irs, &positions.hap, num_elements), pl, fading.rician_factor, &mut rng);

    let mut rng = seed.stream(LinkStream::IrsDevice);
    let h_r = positions
        .devices
        .iter()
        .map(|dev| {
            let pl = path_loss(distance(irs, dev), fading, fading.pathloss_exponent_irs)?;
            Ok(rician(&steering(irs, dev, num_elements), pl, fading.rician_factor, &mut rng))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rng = seed.stream(LinkStream::Direct);
    let h_d = positions
        .devices
        .iter()
        .map(|dev| {
            let pl = path_loss(distance(&positions.hap, dev), fading, fading.pathloss_exponent_direct)?;
            Ok(circular_normal(&mut rng) * pl.sqrt())
        })
        .collect::<Result<Vec<_>>>()?;

    ChannelRealization::new(g, h_r, h_d)
}
