use crate::channel::DerivedChannel;
use crate::model::{ReflectionVector, SystemParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkPhase {
    Downlink,
    /// Uplink slot with the device transmitting at `power` Watts.
    Uplink { power: f64 },
}

/// Amplitudes and phases of a single-device closed-form vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub amplitudes: Vec<f64>,
    /// Phases that co-phase every cascaded term with the direct link.
    pub phases: Vec<f64>,
    /// Common factor `c` before clipping, `a_n = min(c / (|g_n| |h_r,n|), a_max)`.
    pub factor: f64,
}

impl ClosedForm {
    pub fn vector(&self) -> ReflectionVector {
        ReflectionVector::from_polar(&self.amplitudes, &self.phases)
    }
}

/// Single-device amplitudes `a_n = min(c / (|g_n| |h_r,n|), a_max)` with
///
/// * downlink: `c^2 = P_F / sum_n (P_A / |h_r,n|^2 + sigma_n1^2 / (|g_n|^2 |h_r,n|^2))`
/// * uplink: `c^2 = P_F / sum_n (p / |g_n|^2 + sigma_n2^2 / (|g_n|^2 |h_r,n|^2))`
///
/// Without clipping the corresponding amplifying-power constraint is tight.
pub fn closed_form_single_device_amplitudes(
    params: &SystemParams,
    derived: &DerivedChannel,
    phase: LinkPhase,
) -> Result<ClosedForm> {
    if derived.num_devices() != 1 {
        return Err(Error::InvalidParameter("the closed form needs exactly one device".into()));
    }
    let g = &derived.raw.g;
    let h = &derived.raw.h_r[0];
    if g.iter().chain(h.iter()).any(|z| z.norm() == 0.0) {
        return Err(Error::Undefined("closed form needs every |g_n| and |h_r,n| nonzero".into()));
    }
    let denom: f64 = g
        .iter()
        .zip(h.iter())
        .map(|(gn, hn)| {
            let (g2, h2) = (gn.norm_sqr(), hn.norm_sqr());
            match phase {
                LinkPhase::Downlink => params.hap_power / h2 + params.irs_noise_dl / (g2 * h2),
                LinkPhase::Uplink { power } => power / g2 + params.irs_noise_ul / (g2 * h2),
            }
        })
        .sum();
    if denom <= 0.0 {
        return Err(Error::Undefined("closed form denominator is zero".into()));
    }
    let factor = (params.irs_power_budget / denom).sqrt();
    let amplitudes = g
        .iter()
        .zip(h.iter())
        .map(|(gn, hn)| (factor / (gn.norm() * hn.norm())).min(params.max_amplitude))
        .collect();
    let dev = derived.device(0);
    let anchor = dev.h_d.arg();
    let phases = dev.b.iter().map(|b| b.arg() - anchor).collect();
    Ok(ClosedForm { amplitudes, phases, factor })
}
