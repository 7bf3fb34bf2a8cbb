use nalgebra::DVector;

use crate::{CMatrix, CVector, Error, Result, C64};

/// Raw baseband channels of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// HAP to IRS, one entry per element.
    pub g: CVector,
    /// IRS to device `k`.
    pub h_r: Vec<CVector>,
    /// HAP to device `k`.
    pub h_d: Vec<C64>,
}

impl ChannelRealization {
    pub fn new(g: CVector, h_r: Vec<CVector>, h_d: Vec<C64>) -> Result<Self> {
        let n = g.len();
        if n == 0 || h_r.is_empty() {
            return Err(Error::Dimension("need N >= 1 elements and K >= 1 devices".into()));
        }
        if h_r.len() != h_d.len() {
            return Err(Error::Dimension(format!(
                "{} reflected links but {} direct links",
                h_r.len(),
                h_d.len()
            )));
        }
        if let Some(k) = h_r.iter().position(|h| h.len() != n) {
            return Err(Error::Dimension(format!("h_r[{k}] has {} entries, expected {n}", h_r[k].len())));
        }
        let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
        if !(g.iter().all(finite) && h_r.iter().flat_map(|h| h.iter()).all(finite) && h_d.iter().all(finite)) {
            return Err(Error::InvalidParameter("channel entries must be finite".into()));
        }
        Ok(Self { g, h_r, h_d })
    }

    pub fn num_elements(&self) -> usize {
        self.g.len()
    }

    pub fn num_devices(&self) -> usize {
        self.h_d.len()
    }
}

/// Channel quantities cached once per realization.
///
/// * `b[k]` with `b_k^H = h_r,k^H diag(g)`, i.e. `b_k[n] = h_r,k[n] * conj(g[n])`
/// * `q1[n] = |g[n]|^2`, `q2[k][n] = |h_r,k[n]|^2` (diagonals of `Q1`, `Q2,k`)
/// * `t[k] = [b_k; h_d,k]`, so that `t_k^H [v; 1] = h_d,k^H + b_k^H v`
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedChannel {
    pub raw: ChannelRealization,
    pub b: Vec<CVector>,
    pub q1: DVector<f64>,
    pub q2: Vec<DVector<f64>>,
    pub t: Vec<CVector>,
}

impl DerivedChannel {
    pub fn new(raw: &ChannelRealization) -> Result<Self> {
        let raw = ChannelRealization::new(raw.g.clone(), raw.h_r.clone(), raw.h_d.clone())?;
        let n = raw.num_elements();
        let b: Vec<CVector> = raw
            .h_r
            .iter()
            .map(|h| CVector::from_fn(n, |i, _| h[i] * raw.g[i].conj()))
            .collect();
        let q1 = DVector::from_fn(n, |i, _| raw.g[i].norm_sqr());
        let q2 = raw
            .h_r
            .iter()
            .map(|h| DVector::from_fn(n, |i, _| h[i].norm_sqr()))
            .collect();
        let t = b
            .iter()
            .zip(&raw.h_d)
            .map(|(bk, hd)| CVector::from_fn(n + 1, |i, _| if i < n { bk[i] } else { *hd }))
            .collect();
        Ok(Self { raw, b, q1, q2, t })
    }

    pub fn num_elements(&self) -> usize {
        self.q1.len()
    }

    pub fn num_devices(&self) -> usize {
        self.b.len()
    }

    pub fn device(&self, k: usize) -> DeviceView<'_> {
        DeviceView {
            h_d: self.raw.h_d[k],
            b: &self.b[k],
            q1: &self.q1,
            q2: &self.q2[k],
            t: &self.t[k],
        }
    }

    pub fn devices(&self) -> impl Iterator<Item = DeviceView<'_>> {
        (0..self.num_devices()).map(move |k| self.device(k))
    }

    /// `diag(|g_1|^2, ..., |g_N|^2, 1)`.
    pub fn q1_lifted(&self) -> DVector<f64> {
        lift(&self.q1)
    }

    /// `diag(|h_r,k,1|^2, ..., |h_r,k,N|^2, 1)`.
    pub fn q2_lifted(&self, k: usize) -> DVector<f64> {
        lift(&self.q2[k])
    }

    /// Rank-one `B_k = t_k t_k^H`.
    pub fn lifted_gram(&self, k: usize) -> CMatrix {
        let t = &self.t[k];
        t * t.adjoint()
    }
}

fn lift(d: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(d.len() + 1, |i, _| if i < d.len() { d[i] } else { 1.0 })
}

/// Borrowed per-device slice of a [`DerivedChannel`].
#[derive(Debug, Clone, Copy)]
pub struct DeviceView<'a> {
    pub h_d: C64,
    pub b: &'a CVector,
    pub q1: &'a DVector<f64>,
    pub q2: &'a DVector<f64>,
    pub t: &'a CVector,
}

impl DeviceView<'_> {
    /// Effective scalar channel `h_d^H + b^H v`.
    pub fn link(&self, v: &CVector) -> C64 {
        self.h_d.conj() + self.b.dotc(v)
    }
}

/// `v^H diag(d) v` for a real nonnegative diagonal.
pub(crate) fn diag_form(d: &DVector<f64>, v: &CVector) -> f64 {
    d.iter().zip(v.iter()).map(|(w, z)| w * z.norm_sqr()).sum()
}
