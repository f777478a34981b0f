//! Achievable rates and secrecy rate in trace form, with the vector form kept
//! for rank-1 beamformers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{ChannelVector, Complex64, SystemParams};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative tolerance for accepting numerically PSD solver output.
pub const PSD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingState {
    /// Beamforming covariance `W`, mW.
    pub w: CMatrix,
    /// Artificial-noise covariance, mW.
    pub r_m: CMatrix,
    pub pa_x: Vec<f64>,
}

impl BeamformingState {
    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn total_power(&self) -> f64 {
        self.w.trace().re + self.r_m.trace().re
    }

    /// Checks PSD-ness of both covariances, the power budget and the antenna range.
    pub fn validate(&self, power: f64, region_side: f64) -> Result<()> {
        let n = self.pa_x.len();
        if self.w.shape() != (n, n) || self.r_m.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "covariances {:?}/{:?} for {n} antennas",
                self.w.shape(),
                self.r_m.shape()
            )));
        }
        for (name, m) in [("W", &self.w), ("R_m", &self.r_m)] {
            let min = crate::eig::hermitian_eig(m)?.min_eigenvalue();
            let scale = m.trace().re.abs().max(f64::MIN_POSITIVE);
            if min < -PSD_TOLERANCE * scale {
                return Err(Error::NotPsd(format!("{name} has eigenvalue {min:e}")));
            }
        }
        if self.total_power() > power * (1.0 + 1e-9) {
            return Err(Error::InvalidParameter(format!("total power {} exceeds budget {power}", self.total_power())));
        }
        if let Some(x) = self.pa_x.iter().find(|x| !(0.0..=region_side).contains(*x)) {
            return Err(Error::InvalidParameter(format!("antenna at x = {x} outside region")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub rate_bob: f64,
    pub rate_eve: f64,
    pub secrecy_rate: f64,
}

impl RatePair {
    pub fn new(rate_bob: f64, rate_eve: f64) -> Self {
        Self { rate_bob, rate_eve, secrecy_rate: (rate_bob - rate_eve).max(0.0) }
    }

    /// `R_Bob − R_Eve` before the positive-part clamp.
    pub fn unclamped(&self) -> f64 {
        self.rate_bob - self.rate_eve
    }
}

/// `h hᴴ`.
pub fn outer_product(h: &ChannelVector) -> CMatrix {
    let v = h.as_vector();
    v * v.adjoint()
}

/// `Re Tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.transpose().iter()).map(|(x, y)| (x * y).re).sum()
}

/// Quadratic form `hᴴ M h`, real for Hermitian `M`.
pub fn quadratic_form(h: &CVector, m: &CMatrix) -> f64 {
    h.dotc(&(m * h)).re
}

fn psd_trace(h: &CMatrix, m: &CMatrix, what: &str) -> Result<f64> {
    let t = trace_product(h, m);
    let scale = h.trace().re.abs() * m.trace().re.abs();
    if t < -PSD_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotPsd(format!("Tr(H {what}) = {t:e} is negative")));
    }
    Ok(t.max(0.0))
}

/// `log2(1 + Tr(H W) / (Tr(H R_m) + σ²))`.
pub fn rate(h_user: &CMatrix, w: &CMatrix, r_m: &CMatrix, noise: f64) -> Result<f64> {
    if !(noise > 0.0) {
        return Err(Error::InvalidParameter(format!("noise power must be positive, got {noise}")));
    }
    let n = h_user.nrows();
    if h_user.shape() != (n, n) || w.shape() != (n, n) || r_m.shape() != (n, n) {
        return Err(Error::Dimension("rate operands must share one square shape".into()));
    }
    let signal = psd_trace(h_user, w, "W")?;
    let interference = psd_trace(h_user, r_m, "R_m")?;
    Ok((signal / (interference + noise)).ln_1p() / std::f64::consts::LN_2)
}

/// Vector-form rate for a rank-1 beamformer `w`.
pub fn rate_vector(h: &CVector, w: &CVector, r_m: &CMatrix, noise: f64) -> f64 {
    let signal = h.dotc(w).norm_sqr();
    let interference = quadratic_form(h, r_m).max(0.0);
    (signal / (interference + noise)).ln_1p() / std::f64::consts::LN_2
}

pub fn secrecy_rate(
    h_bob: &ChannelVector,
    h_eve: &ChannelVector,
    state: &BeamformingState,
    params: &SystemParams,
) -> Result<RatePair> {
    if h_bob.len() != state.dim() || h_eve.len() != state.dim() {
        return Err(Error::Dimension("channel length does not match covariance size".into()));
    }
    let rb = rate(&outer_product(h_bob), &state.w, &state.r_m, params.noise_bob)?;
    let re = rate(&outer_product(h_eve), &state.w, &state.r_m, params.noise_eve)?;
    Ok(RatePair::new(rb, re))
}
