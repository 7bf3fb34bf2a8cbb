use crate::channel::{diag_form, DeviceView};
use crate::model::{ReflectionVector, SystemParams};

/// First-order lower bound of `P_A |h_d^H + b^H v|^2 + sigma_n1^2 v^H Q2 v`
/// around `v_hat`; exact at `v = v_hat`.
pub fn sca_surrogate_qk(params: &SystemParams, dev: &DeviceView<'_>, v: &ReflectionVector, v_hat: &ReflectionVector) -> f64 {
    let (v, vh) = (v.as_vector(), v_hat.as_vector());
    let z_hat = dev.link(vh);
    let z = dev.link(v);
    let cross: f64 = dev
        .q2
        .iter()
        .zip(vh.iter().zip(v.iter()))
        .map(|(q, (a, b))| q * (a.conj() * b).re)
        .sum();
    let s = params.irs_noise_dl;
    -s * diag_form(dev.q2, vh) + 2.0 * s * cross - params.hap_power * z_hat.norm_sqr()
        + 2.0 * params.hap_power * (z_hat.conj() * z).re
}

/// `q(v) = c0 + 2 Re{l^H v}`.
pub(crate) fn sca_affine(params: &SystemParams, dev: &DeviceView<'_>, v_hat: &ReflectionVector) -> (f64, crate::CVector) {
    let vh = v_hat.as_vector();
    let z_hat = dev.link(vh);
    let s = params.irs_noise_dl;
    let l = crate::CVector::from_fn(vh.len(), |n, _| vh[n] * (s * dev.q2[n]) + dev.b[n] * (z_hat * params.hap_power));
    let c0 = -s * diag_form(dev.q2, vh) - params.hap_power * z_hat.norm_sqr()
        + 2.0 * params.hap_power * (z_hat.conj() * dev.h_d.conj()).re;
    (c0, l)
}
