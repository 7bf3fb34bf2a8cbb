//! Experiment configuration in user units (powers in dBm, times in seconds,
//! amplitude caps in dB).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ao::SolverConfig;
use crate::channel::{FadingConfig, GeometryConfig};
use crate::model::SystemParams;
use crate::units::{db_to_amplitude, dbm_to_watts};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    UeActive,
    UlActive,
    StaticActive,
    UePassive,
    StaticPassive,
}

impl Scheme {
    pub const ALL: [Scheme; 5] =
        [Scheme::UeActive, Scheme::UlActive, Scheme::StaticActive, Scheme::UePassive, Scheme::StaticPassive];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::UeActive => "ue_active",
            Scheme::UlActive => "ul_active",
            Scheme::StaticActive => "static_active",
            Scheme::UePassive => "ue_passive",
            Scheme::StaticPassive => "static_passive",
        }
    }

    pub fn is_passive(self) -> bool {
        matches!(self, Scheme::UePassive | Scheme::StaticPassive)
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    /// HAP transmit power in dBm.
    #[serde(rename = "P_A_dbm", alias = "p_a_dbm")]
    HapPowerDbm,
    /// Cluster centre; the IRS moves with it.
    #[serde(rename = "x_ue")]
    ClusterX,
    #[serde(rename = "x_irs")]
    IrsX,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::HapPowerDbm => "P_A_dbm",
            SweepVariable::ClusterX => "x_ue",
            SweepVariable::IrsX => "x_irs",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
}

/// Physical parameters in user units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsConfig {
    pub hap_power_dbm: f64,
    pub irs_power_budget_dbm: f64,
    pub irs_noise_dl_dbm: f64,
    pub irs_noise_ul_dbm: f64,
    pub rx_noise_dl_dbm: f64,
    pub rx_noise_ul_dbm: f64,
    pub efficiency: f64,
    pub frame_time: f64,
    pub num_elements: usize,
    /// One weight per device; all ones when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            hap_power_dbm: 20.0,
            irs_power_budget_dbm: 5.0,
            irs_noise_dl_dbm: -90.0,
            irs_noise_ul_dbm: -90.0,
            rx_noise_dl_dbm: -90.0,
            rx_noise_ul_dbm: -90.0,
            efficiency: 0.8,
            frame_time: 1.0,
            num_elements: 10,
            weights: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub num_realizations: usize,
    pub schemes: Vec<Scheme>,
    /// Amplitude caps of the active schemes in dB; passive schemes always
    /// run once with a 0 dB (unit) cap.
    pub amax_db: Vec<f64>,
    pub output_dir: PathBuf,
    pub sweep: SweepSpec,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub fading: FadingConfig,
    #[serde(default)]
    pub solver: SolverConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            num_realizations: 50,
            schemes: Scheme::ALL.to_vec(),
            amax_db: vec![10.0, 25.0],
            output_dir: PathBuf::from("results"),
            sweep: SweepSpec { variable: SweepVariable::HapPowerDbm, grid: vec![10.0, 15.0, 20.0, 25.0, 30.0] },
            params: ParamsConfig::default(),
            geometry: GeometryConfig::default(),
            fading: FadingConfig::default(),
            solver: SolverConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.sweep.grid.is_empty() {
            return bad("sweep.grid must not be empty".into());
        }
        if self.sweep.grid.iter().any(|x| !x.is_finite()) || self.sweep.grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("sweep.grid must be finite and strictly increasing".into());
        }
        if self.num_realizations == 0 {
            return bad("num_realizations must be >= 1".into());
        }
        if self.schemes.is_empty() {
            return bad("schemes must not be empty".into());
        }
        if self.schemes.iter().any(|s| !s.is_passive()) && self.amax_db.is_empty() {
            return bad("amax_db must not be empty when active schemes are listed".into());
        }
        if self.amax_db.iter().any(|a| !a.is_finite()) {
            return bad("amax_db entries must be finite".into());
        }
        if let Some(w) = &self.params.weights {
            if w.len() != self.geometry.num_devices {
                return bad(format!("{} weights for {} devices", w.len(), self.geometry.num_devices));
            }
        }
        self.geometry.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.solver.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.system_params(self.sweep.grid[0], self.amax_db.first().copied().unwrap_or(0.0))
            .validate()
            .map_err(|e| Error::Config(e.to_string()))
    }

    /// Parameters at one sweep point and amplitude cap.
    pub fn system_params(&self, sweep_value: f64, amax_db: f64) -> SystemParams {
        let p = &self.params;
        let hap_dbm = if self.sweep.variable == SweepVariable::HapPowerDbm { sweep_value } else { p.hap_power_dbm };
        SystemParams {
            hap_power: dbm_to_watts(hap_dbm),
            irs_power_budget: dbm_to_watts(p.irs_power_budget_dbm),
            irs_noise_dl: dbm_to_watts(p.irs_noise_dl_dbm),
            irs_noise_ul: dbm_to_watts(p.irs_noise_ul_dbm),
            rx_noise_dl: dbm_to_watts(p.rx_noise_dl_dbm),
            rx_noise_ul: dbm_to_watts(p.rx_noise_ul_dbm),
            efficiency: p.efficiency,
            frame_time: p.frame_time,
            max_amplitude: db_to_amplitude(amax_db),
            weights: p.weights.clone().unwrap_or_else(|| vec![1.0; self.geometry.num_devices]),
            num_elements: p.num_elements,
        }
    }

    /// Geometry at one sweep point.
    pub fn geometry_at(&self, sweep_value: f64) -> GeometryConfig {
        let mut g = self.geometry.clone();
        match self.sweep.variable {
            SweepVariable::HapPowerDbm => {}
            SweepVariable::ClusterX => {
                g.cluster_center_x = sweep_value;
                g.irs_x = sweep_value;
            }
            SweepVariable::IrsX => g.irs_x = sweep_value,
        }
        g
    }

    /// `(scheme, amax_db)` pairs run at every sweep point and realization.
    pub fn scheme_runs(&self) -> Vec<(Scheme, f64)> {
        let mut runs = Vec::new();
        for &s in &self.schemes {
            if s.is_passive() {
                runs.push((s, 0.0));
            } else {
                runs.extend(self.amax_db.iter().map(|&a| (s, a)));
            }
        }
        runs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let c = ExperimentConfig::default();
        let back = ExperimentConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn unknown_key_rejected() {
        let mut text = ExperimentConfig::default().to_toml();
        text = text.replace("num_realizations", "num_realisations");
        assert!(matches!(ExperimentConfig::from_toml(&text), Err(Error::Config(_))));
    }

    #[test]
    fn unsorted_grid_rejected() {
        let mut c = ExperimentConfig::default();
        c.sweep.grid = vec![20.0, 10.0];
        assert!(c.validate().is_err());
    }

    #[test]
    fn dbm_applied_at_parse() {
        let c = ExperimentConfig::default();
        let p = c.system_params(30.0, 10.0);
        assert!((p.hap_power - 1.0).abs() < 1e-15);
        assert!((p.max_amplitude - 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn passive_schemes_collapse_amax() {
        let c = ExperimentConfig::default();
        let runs = c.scheme_runs();
        assert_eq!(runs.len(), 3 * 2 + 2);
        assert!(runs.contains(&(Scheme::UePassive, 0.0)));
    }
}
