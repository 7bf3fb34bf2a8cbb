use crate::units::{db_to_amplitude, dbm_to_watts};
use crate::{Error, Result};

/// Scalar system constants, all in SI units.
///
/// `rx_noise_dl` is carried for completeness but no formula reads it: the
/// harvested-energy model ignores receiver noise.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// HAP transmit power `P_A` (W).
    pub hap_power: f64,
    /// IRS amplifying power budget `P_F` (W). `f64::INFINITY` removes the
    /// amplifying-power constraints (passive surface).
    pub irs_power_budget: f64,
    /// IRS thermal noise during downlink energy transfer (W).
    pub irs_noise_dl: f64,
    /// IRS thermal noise during uplink information transfer (W).
    pub irs_noise_ul: f64,
    pub rx_noise_dl: f64,
    /// HAP receiver noise during uplink (W).
    pub rx_noise_ul: f64,
    /// Energy conversion efficiency `eta`.
    pub efficiency: f64,
    /// Frame length `T_max` (s).
    pub frame_time: f64,
    /// Per-element amplitude bound `a_max` (linear).
    pub max_amplitude: f64,
    /// Throughput weights, one per device.
    pub weights: Vec<f64>,
    pub num_elements: usize,
}

impl Default for SystemParams {
    fn default() -> Self {
        let noise = dbm_to_watts(-90.0);
        Self {
            hap_power: dbm_to_watts(20.0),
            irs_power_budget: dbm_to_watts(5.0),
            irs_noise_dl: noise,
            irs_noise_ul: noise,
            rx_noise_dl: noise,
            rx_noise_ul: noise,
            efficiency: 0.8,
            frame_time: 1.0,
            max_amplitude: db_to_amplitude(25.0),
            weights: vec![1.0; 4],
            num_elements: 10,
        }
    }
}

impl SystemParams {
    pub fn num_devices(&self) -> usize {
        self.weights.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        let powers = [
            self.hap_power,
            self.irs_noise_dl,
            self.irs_noise_ul,
            self.rx_noise_dl,
            self.rx_noise_ul,
        ];
        if powers.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return bad("powers and noise variances must be finite and >= 0");
        }
        if !(self.irs_power_budget >= 0.0) {
            return bad("IRS power budget must be >= 0");
        }
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return bad("efficiency must lie in (0, 1]");
        }
        if !(self.frame_time > 0.0 && self.frame_time.is_finite()) {
            return bad("frame time must be > 0");
        }
        if !(self.max_amplitude > 0.0) {
            return bad("max amplitude must be > 0");
        }
        if self.weights.is_empty() || self.weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return bad("weights must be positive, one per device");
        }
        if self.num_elements == 0 {
            return bad("IRS needs at least one element");
        }
        Ok(())
    }

    /// Whether the amplifying-power constraints are active.
    pub fn has_power_budget(&self) -> bool {
        self.irs_power_budget.is_finite()
    }
}
