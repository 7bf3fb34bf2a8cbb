use crate::{CVector, Error, Result, C64};

/// Complex reflection coefficients `v_n = a_n e^{j theta_n}` of the IRS.
/// Amplitude bounds are checked by the feasibility report, not here.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionVector(pub CVector);

impl ReflectionVector {
    pub fn new(v: CVector) -> Result<Self> {
        if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidParameter("reflection coefficients must be finite".into()));
        }
        Ok(Self(v))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CVector::zeros(n))
    }

    pub fn from_polar(amplitudes: &[f64], phases: &[f64]) -> Self {
        Self(CVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().zip(phases).map(|(a, th)| C64::from_polar(*a, *th)),
        ))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.norm()).collect()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.arg()).collect()
    }

    pub fn max_amplitude(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn as_vector(&self) -> &CVector {
        &self.0
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(&self.0 * C64::from(s))
    }
}

/// Reflection vectors of one solution, tagged by beamforming setup.
#[derive(Debug, Clone, PartialEq)]
pub enum Reflections {
    /// One downlink vector and one dedicated uplink vector per device.
    UserAdaptive { downlink: ReflectionVector, uplink: Vec<ReflectionVector> },
    /// One downlink vector and one uplink vector shared by all devices.
    UplinkAdaptive { downlink: ReflectionVector, uplink: ReflectionVector },
    /// A single vector for the whole frame.
    Static { shared: ReflectionVector },
}

impl Reflections {
    pub fn downlink(&self) -> &ReflectionVector {
        match self {
            Reflections::UserAdaptive { downlink, .. } | Reflections::UplinkAdaptive { downlink, .. } => downlink,
            Reflections::Static { shared } => shared,
        }
    }

    /// Vector used during device `k`'s uplink slot.
    pub fn uplink(&self, k: usize) -> &ReflectionVector {
        match self {
            Reflections::UserAdaptive { uplink, .. } => &uplink[k],
            Reflections::UplinkAdaptive { uplink, .. } => uplink,
            Reflections::Static { shared } => shared,
        }
    }

    /// Every distinct vector held by the solution.
    pub fn all(&self) -> Vec<&ReflectionVector> {
        match self {
            Reflections::UserAdaptive { downlink, uplink } => std::iter::once(downlink).chain(uplink).collect(),
            Reflections::UplinkAdaptive { downlink, uplink } => vec![downlink, uplink],
            Reflections::Static { shared } => vec![shared],
        }
    }

    /// Checks vector lengths against `n` elements and `k` devices.
    pub fn validate(&self, n: usize, k: usize) -> Result<()> {
        if let Reflections::UserAdaptive { uplink, .. } = self {
            if uplink.len() != k {
                return Err(Error::Dimension(format!("{} uplink vectors for {k} devices", uplink.len())));
            }
        }
        if self.all().iter().any(|v| v.len() != n) {
            return Err(Error::Dimension(format!("reflection vectors must have {n} entries")));
        }
        Ok(())
    }
}
