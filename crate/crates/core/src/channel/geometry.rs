use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Node layout: HAP, an IRS at `(irs_x, 0, irs_height)` and `K` devices
/// uniformly distributed over a horizontal disk centred at
/// `(cluster_center_x, 0, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub hap_position: [f64; 3],
    pub irs_x: f64,
    pub irs_height: f64,
    pub cluster_center_x: f64,
    pub cluster_radius: f64,
    pub num_devices: usize,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            hap_position: [0.0, 0.0, 0.0],
            irs_x: 10.0,
            irs_height: 2.0,
            cluster_center_x: 10.0,
            cluster_radius: 1.0,
            num_devices: 4,
        }
    }
}

impl GeometryConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = self.hap_position.iter().all(|c| c.is_finite())
            && self.irs_x.is_finite()
            && self.irs_height.is_finite()
            && self.cluster_center_x.is_finite()
            && self.cluster_radius.is_finite();
        if !finite {
            return Err(Error::InvalidParameter("geometry coordinates must be finite".into()));
        }
        // A zero radius is accepted and collapses the cluster to its centre.
        if self.cluster_radius < 0.0 {
            return Err(Error::InvalidParameter("cluster_radius must be >= 0".into()));
        }
        if self.num_devices == 0 {
            return Err(Error::InvalidParameter("num_devices must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Positions {
    pub hap: [f64; 3],
    pub irs: [f64; 3],
    pub devices: Vec<[f64; 3]>,
}

pub(crate) fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Draws device positions uniformly over the disk (radius scaled by the square
/// root of a uniform variate). Offsets are drawn relative to the cluster
/// centre, so moving the centre keeps the relative layout of a realization.
pub fn place_nodes<R: Rng + ?Sized>(config: &GeometryConfig, rng: &mut R) -> Result<Positions> {
    config.validate()?;
    let center = [config.cluster_center_x, 0.0, 0.0];
    let devices = (0..config.num_devices)
        .map(|_| {
            let r = config.cluster_radius * rng.random::<f64>().sqrt();
            let phi = std::f64::consts::TAU * rng.random::<f64>();
            [center[0] + r * phi.cos(), center[1] + r * phi.sin(), 0.0]
        })
        .collect();
    Ok(Positions {
        hap: config.hap_position,
        irs: [config.irs_x, 0.0, config.irs_height],
        devices,
    })
}
