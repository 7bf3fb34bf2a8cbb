use super::quantities::{dl_amplify_power, harvested_energy, ul_amplify_power};
use super::{Reflections, ResourceAllocation, SystemParams};
use crate::channel::DerivedChannel;
use crate::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Which problem's constraint set a candidate is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    UserAdaptive,
    UplinkAdaptive,
    Static,
}

/// Slack of every constraint, normalized so that `0` is the boundary and
/// negative values are violations:
///
/// * budget constraints `lhs <= rhs` report `(rhs - lhs) / |rhs|` (`-1` when
///   `rhs = 0 < lhs`)
/// * amplitude caps report `(a_max - a) / a_max`
/// * nonnegativity reports the smallest raw variable (seconds or Watts)
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub energy_causality: Vec<f64>,
    pub dl_amplify: f64,
    pub ul_amplify: Vec<f64>,
    pub time: f64,
    pub nonnegativity: f64,
    pub amplitude: f64,
    pub tolerance: f64,
    pub feasible: bool,
}

impl FeasibilityReport {
    pub fn min_slack(&self) -> f64 {
        self.energy_causality
            .iter()
            .chain(&self.ul_amplify)
            .chain([&self.dl_amplify, &self.time, &self.nonnegativity, &self.amplitude])
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

fn relative_slack(lhs: f64, rhs: f64) -> f64 {
    if rhs.is_infinite() {
        return f64::INFINITY;
    }
    let scale = if rhs != 0.0 { rhs.abs() } else { lhs.abs() };
    if scale == 0.0 {
        0.0
    } else {
        (rhs - lhs) / scale
    }
}

/// Evaluates the constraint set of `kind` at the given point.
///
/// The static setup checks its single vector against both the downlink and
/// uplink amplifying-power constraints; the uplink-adaptive setup checks the
/// shared uplink vector against every device's uplink constraint.
pub fn check_feasibility(
    kind: ProblemKind,
    params: &SystemParams,
    derived: &DerivedChannel,
    alloc: &ResourceAllocation,
    reflections: &Reflections,
    tolerance: f64,
) -> Result<FeasibilityReport> {
    let matches = matches!(
        (kind, reflections),
        (ProblemKind::UserAdaptive, Reflections::UserAdaptive { .. })
            | (ProblemKind::UplinkAdaptive, Reflections::UplinkAdaptive { .. })
            | (ProblemKind::Static, Reflections::Static { .. })
    );
    if !matches {
        return Err(Error::Dimension(format!("{kind:?} problem given mismatched reflection setup")));
    }
    let k = derived.num_devices();
    if alloc.num_devices() != k {
        return Err(Error::Dimension(format!("allocation for {} devices, channel has {k}", alloc.num_devices())));
    }
    reflections.validate(derived.num_elements(), k)?;

    let v0 = reflections.downlink();
    let energy_causality = derived
        .devices()
        .enumerate()
        .map(|(i, dev)| {
            relative_slack(alloc.power[i] * alloc.tau[i], harvested_energy(params, &dev, v0, alloc.tau0))
        })
        .collect();
    let dl_amplify = relative_slack(dl_amplify_power(params, derived, v0), params.irs_power_budget);
    let ul_amplify = derived
        .devices()
        .enumerate()
        .map(|(i, dev)| {
            relative_slack(
                ul_amplify_power(params, &dev, reflections.uplink(i), alloc.power[i]),
                params.irs_power_budget,
            )
        })
        .collect();
    let time = relative_slack(alloc.total_time(), params.frame_time);
    let nonnegativity = std::iter::once(alloc.tau0)
        .chain(alloc.tau.iter().copied())
        .chain(alloc.power.iter().copied())
        .fold(f64::INFINITY, f64::min);
    let amplitude = reflections
        .all()
        .iter()
        .map(|v| (params.max_amplitude - v.max_amplitude()) / params.max_amplitude)
        .fold(f64::INFINITY, f64::min);

    let mut report = FeasibilityReport {
        energy_causality,
        dl_amplify,
        ul_amplify,
        time,
        nonnegativity,
        amplitude,
        tolerance,
        feasible: false,
    };
    report.feasible = report.min_slack() >= -tolerance;
    Ok(report)
}
