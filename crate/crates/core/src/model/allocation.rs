use crate::{Error, Result};

/// Time and power allocation. `energy[k] = power[k] * tau[k]` is the
/// substituted transmit energy used by the convex subproblems.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceAllocation {
    pub tau0: f64,
    pub tau: Vec<f64>,
    pub power: Vec<f64>,
    pub energy: Vec<f64>,
}

impl ResourceAllocation {
    pub fn from_power(tau0: f64, tau: Vec<f64>, power: Vec<f64>) -> Result<Self> {
        if tau.len() != power.len() {
            return Err(Error::Dimension("tau and power lengths differ".into()));
        }
        let energy = tau.iter().zip(&power).map(|(t, p)| t * p).collect();
        Ok(Self { tau0, tau, power, energy })
    }

    /// Builds the allocation from energies; `p_k = f_k / tau_k`, and a zero
    /// slot carries zero power.
    pub fn from_energy(tau0: f64, tau: Vec<f64>, energy: Vec<f64>) -> Result<Self> {
        if tau.len() != energy.len() {
            return Err(Error::Dimension("tau and energy lengths differ".into()));
        }
        let power = tau
            .iter()
            .zip(&energy)
            .map(|(t, f)| if *t > 0.0 { f / t } else { 0.0 })
            .collect();
        Ok(Self { tau0, tau, power, energy })
    }

    pub fn num_devices(&self) -> usize {
        self.tau.len()
    }

    pub fn total_time(&self) -> f64 {
        self.tau0 + self.tau.iter().sum::<f64>()
    }
}
