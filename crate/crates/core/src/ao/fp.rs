//! Closed-form auxiliary updates of the quadratic transform.

use crate::channel::{diag_form, DeviceView};
use crate::model::{uplink_sinr, ReflectionVector, SystemParams};
use crate::{Error, Result, C64};

fn uplink_noise(params: &SystemParams, dev: &DeviceView<'_>, v: &ReflectionVector) -> f64 {
    params.irs_noise_ul * diag_form(dev.q1, v.as_vector()) + params.rx_noise_ul
}

/// `iota = (h_d^H + b^H v) / (sigma_n2^2 v^H Q1 v + sigma_z2^2)`, the maximizer
/// of `2 Re{conj(iota) z} - |iota|^2 D`.
pub fn fp_update_iota_ue(params: &SystemParams, dev: &DeviceView<'_>, v: &ReflectionVector) -> Result<C64> {
    let d = uplink_noise(params, dev, v);
    if !(d > 0.0) {
        return Err(Error::DivisionByZero("uplink noise power is zero"));
    }
    Ok(dev.link(v.as_vector()) / d)
}

/// SINR auxiliary: the uplink SINR itself.
pub fn fp_update_chi(params: &SystemParams, dev: &DeviceView<'_>, power: f64, v: &ReflectionVector) -> Result<f64> {
    if power == 0.0 {
        return Ok(0.0);
    }
    uplink_sinr(params, dev, v, power)
}

/// `iota = sqrt(w tau (1+chi) p) z / (p |z|^2 + sigma_n2^2 v^H Q1 v + sigma_z2^2)`
/// with `z = h_d^H + b^H v`.
pub fn fp_update_iota_ul(
    params: &SystemParams,
    dev: &DeviceView<'_>,
    weight: f64,
    tau: f64,
    power: f64,
    chi: f64,
    v: &ReflectionVector,
) -> Result<C64> {
    let z = dev.link(v.as_vector());
    let d = power * z.norm_sqr() + uplink_noise(params, dev, v);
    if !(d > 0.0) {
        return Err(Error::DivisionByZero("uplink noise power is zero"));
    }
    Ok(z * ((weight * tau * (1.0 + chi) * power).sqrt() / d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ChannelRealization, DerivedChannel};
    use crate::CVector;

    fn scalar(h_d: f64, b: f64) -> (SystemParams, DerivedChannel) {
        let raw = ChannelRealization::new(
            CVector::from_element(1, C64::new(1.0, 0.0)),
            vec![CVector::from_element(1, C64::new(b, 0.0))],
            vec![C64::new(h_d, 0.0)],
        )
        .unwrap();
        let mut p = SystemParams::default();
        p.irs_noise_ul = 1.0;
        p.rx_noise_ul = 1.0;
        p.weights = vec![1.0];
        p.num_elements = 1;
        (p, DerivedChannel::new(&raw).unwrap())
    }

    #[test]
    fn iota_ue_scalar() {
        let (p, d) = scalar(0.0, 1.0);
        let v = ReflectionVector(CVector::from_element(1, C64::new(1.0, 0.0)));
        assert!((fp_update_iota_ue(&p, &d.device(0), &v).unwrap() - C64::new(0.5, 0.0)).norm() < 1e-15);
        let zero = ReflectionVector::zeros(1);
        let (p, d) = scalar(0.3, 1.0);
        assert!((fp_update_iota_ue(&p, &d.device(0), &zero).unwrap() - C64::new(0.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn iota_ul_scalar() {
        let (p, d) = scalar(1.0, 0.0);
        let v = ReflectionVector::zeros(1);
        let i = fp_update_iota_ul(&p, &d.device(0), 1.0, 1.0, 1.0, 0.0, &v).unwrap();
        assert!((i - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(fp_update_iota_ul(&p, &d.device(0), 1.0, 1.0, 0.0, 0.0, &v).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn chi_zero_power() {
        let (p, d) = scalar(1.0, 0.5);
        assert_eq!(fp_update_chi(&p, &d.device(0), 0.0, &ReflectionVector::zeros(1)).unwrap(), 0.0);
    }

    #[test]
    fn zero_noise_rejected() {
        let (mut p, d) = scalar(1.0, 0.5);
        p.rx_noise_ul = 0.0;
        assert!(fp_update_iota_ue(&p, &d.device(0), &ReflectionVector::zeros(1)).is_err());
    }
}
