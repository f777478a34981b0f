//! Geometry, physical constants and the pinching-antenna channel model.
//!
//! All powers are carried in linear milliwatts; dBm only appears at the
//! boundary through [`dbm_to_linear`].

use std::f64::consts::PI;

use nalgebra::{Complex, DVector};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Converts a power in dBm to milliwatts.
pub fn dbm_to_linear(p_dbm: f64) -> f64 {
    10f64.powf(p_dbm / 10.0)
}

/// Converts a power in milliwatts to dBm.
pub fn linear_to_dbm(p_mw: f64) -> f64 {
    10.0 * p_mw.log10()
}

/// Carrier and propagation constants shared by every scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub carrier_frequency: f64,
    pub wavelength: f64,
    pub guided_wavelength: f64,
    pub n_eff: f64,
    /// Free-space reference gain `(λ/4π)²`, m².
    pub path_loss_constant: f64,
    /// Waveguide height above the user plane, m.
    pub height: f64,
    /// Side of the square service region, m. Waveguides span `[0, region_side]`.
    pub region_side: f64,
    pub num_waveguides: usize,
    /// Bob's receiver noise power, mW.
    pub noise_bob: f64,
    /// Eve's receiver noise power, mW.
    pub noise_eve: f64,
}

impl SystemParams {
    pub fn new(
        carrier_frequency: f64,
        n_eff: f64,
        height: f64,
        region_side: f64,
        num_waveguides: usize,
        noise_bob_dbm: f64,
        noise_eve_dbm: f64,
    ) -> Result<Self> {
        if !(carrier_frequency.is_finite() && carrier_frequency > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "carrier frequency must be positive, got {carrier_frequency}"
            )));
        }
        if !(n_eff.is_finite() && n_eff >= 1.0) {
            return Err(Error::InvalidParameter(format!("effective refractive index must be >= 1, got {n_eff}")));
        }
        if !(height.is_finite() && height > 0.0) {
            return Err(Error::InvalidParameter(format!("height must be positive, got {height}")));
        }
        if !(region_side.is_finite() && region_side > 0.0) {
            return Err(Error::InvalidParameter(format!("region side must be positive, got {region_side}")));
        }
        if num_waveguides < 1 {
            return Err(Error::InvalidParameter("at least one waveguide is required".into()));
        }
        if !(noise_bob_dbm.is_finite() && noise_eve_dbm.is_finite()) {
            return Err(Error::InvalidParameter("noise powers must be finite".into()));
        }
        let wavelength = SPEED_OF_LIGHT / carrier_frequency;
        Ok(Self {
            carrier_frequency,
            wavelength,
            guided_wavelength: wavelength / n_eff,
            n_eff,
            path_loss_constant: (wavelength / (4.0 * PI)).powi(2),
            height,
            region_side,
            num_waveguides,
            noise_bob: dbm_to_linear(noise_bob_dbm),
            noise_eve: dbm_to_linear(noise_eve_dbm),
        })
    }

    /// Simulation defaults: 28 GHz, `n_eff = 1.4`, `d = 3 m`, `D = 30 m`, −90 dBm noise.
    pub fn reference(num_waveguides: usize) -> Self {
        Self::new(28e9, 1.4, 3.0, 30.0, num_waveguides, -90.0, -90.0).expect("reference parameters are valid")
    }

    pub fn with_num_waveguides(&self, num_waveguides: usize) -> Result<Self> {
        if num_waveguides < 1 {
            return Err(Error::InvalidParameter("at least one waveguide is required".into()));
        }
        Ok(Self { num_waveguides, ..self.clone() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// A ground-plane user location.
    pub const fn ground(x: f64, y: f64) -> Self {
        Self { x, y, z: 0.0 }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2)).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Parallel waveguides along x, uniformly spaced in y at height `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveguideLayout {
    pub feed_points: Vec<Position>,
    pub y_coords: Vec<f64>,
    pub height: f64,
}

impl WaveguideLayout {
    pub fn new(params: &SystemParams, feed_x: f64) -> Result<Self> {
        if !(0.0..=params.region_side).contains(&feed_x) {
            return Err(Error::InvalidParameter(format!("feed x = {feed_x} lies outside [0, {}]", params.region_side)));
        }
        let n = params.num_waveguides;
        let y_coords: Vec<f64> = (0..n).map(|i| i as f64 * params.region_side / n as f64).collect();
        let feed_points = y_coords.iter().map(|&y| Position::new(feed_x, y, params.height)).collect();
        Ok(Self { feed_points, y_coords, height: params.height })
    }

    pub fn len(&self) -> usize {
        self.y_coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y_coords.is_empty()
    }

    /// Location of the pinching antenna on waveguide `n` at abscissa `x`.
    pub fn antenna(&self, n: usize, x: f64) -> Position {
        Position::new(x, self.y_coords[n], self.height)
    }
}

pub fn waveguide_layout(params: &SystemParams, feed_x: f64) -> Result<WaveguideLayout> {
    WaveguideLayout::new(params, feed_x)
}

/// Per-antenna channel coefficients towards one user.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector(pub DVector<Complex64>);

impl ChannelVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.0
    }
}

/// Line-of-sight coefficient from an antenna fed at `feed` to `user`:
/// free-space loss plus the free-space and in-guide phase rotations.
pub fn channel_coeff(user: &Position, pa: &Position, feed: &Position, params: &SystemParams) -> Result<Complex64> {
    let r = user.distance(pa);
    if !(r > 0.0) {
        return Err(Error::SingularChannel);
    }
    let guided = feed.distance(pa);
    let phase = -2.0 * PI / params.wavelength * r - 2.0 * PI / params.guided_wavelength * guided;
    Ok(Complex64::from_polar(params.path_loss_constant.sqrt() / r, phase))
}

pub fn channel_vector(
    user: &Position,
    pa_x: &[f64],
    layout: &WaveguideLayout,
    params: &SystemParams,
) -> Result<ChannelVector> {
    if pa_x.len() != layout.len() {
        return Err(Error::Dimension(format!("{} antenna positions for {} waveguides", pa_x.len(), layout.len())));
    }
    let mut h = DVector::zeros(pa_x.len());
    for (n, &x) in pa_x.iter().enumerate() {
        if !(0.0..=params.region_side).contains(&x) {
            return Err(Error::InvalidParameter(format!(
                "antenna {n} at x = {x} lies outside [0, {}]",
                params.region_side
            )));
        }
        h[n] = channel_coeff(user, &layout.antenna(n, x), &layout.feed_points[n], params)?;
    }
    Ok(ChannelVector(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dbm_conversions() {
        assert_eq!(dbm_to_linear(0.0), 1.0);
        assert_relative_eq!(dbm_to_linear(10.0), 10.0, max_relative = 1e-15);
        assert_relative_eq!(dbm_to_linear(-90.0), 1e-9, max_relative = 1e-14);
        assert_relative_eq!(linear_to_dbm(dbm_to_linear(13.0)), 13.0, max_relative = 1e-14);
    }

    #[test]
    fn derived_wavelengths() {
        let p = SystemParams::reference(1);
        // c / f_c with c = 299792458 m/s
        assert_relative_eq!(p.wavelength, 0.010_706_873_5, max_relative = 1e-12);
        assert_relative_eq!(p.guided_wavelength, 0.007_647_766_785_714_286, max_relative = 1e-12);
        assert_eq!(p.guided_wavelength, p.wavelength / p.n_eff);
        assert_relative_eq!(p.path_loss_constant, 7.259_481_705_540_117e-7, max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(SystemParams::new(0.0, 1.4, 3.0, 30.0, 1, -90.0, -90.0).is_err());
        assert!(SystemParams::new(28e9, 0.9, 3.0, 30.0, 1, -90.0, -90.0).is_err());
        assert!(SystemParams::new(28e9, 1.4, 3.0, 30.0, 0, -90.0, -90.0).is_err());
        assert!(SystemParams::new(28e9, 1.4, -3.0, 30.0, 1, -90.0, -90.0).is_err());
    }

    #[test]
    fn layout_y_coordinates() {
        let y = |n| WaveguideLayout::new(&SystemParams::reference(n), 0.0).unwrap().y_coords;
        assert_eq!(y(1), vec![0.0]);
        assert_eq!(y(2), vec![0.0, 15.0]);
        assert_eq!(y(6), vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0]);
        assert!(WaveguideLayout::new(&SystemParams::reference(2), 31.0).is_err());
        let l = WaveguideLayout::new(&SystemParams::reference(3), 0.0).unwrap();
        assert!(l.feed_points.iter().zip(&l.y_coords).all(|(f, &y)| f.y == y && f.z == 3.0));
    }

    #[test]
    fn coefficient_magnitude_and_phase() {
        let p = SystemParams::reference(1);
        let user = Position::ground(5.0, 5.0);
        let pa = Position::new(5.0, 5.0, 3.0);
        let h = channel_coeff(&user, &pa, &Position::new(0.0, 5.0, 3.0), &p).unwrap();
        assert_relative_eq!(h.norm(), p.path_loss_constant.sqrt() / 3.0, max_relative = 1e-14);

        let h0 = channel_coeff(&user, &pa, &pa, &p).unwrap();
        let expected = (-2.0 * PI * 3.0 / p.wavelength).rem_euclid(2.0 * PI);
        let diff = (h0.arg().rem_euclid(2.0 * PI) - expected).abs();
        assert!(diff.min(2.0 * PI - diff) < 1e-9);
    }

    #[test]
    fn coefficient_matches_hand_evaluation() {
        // Evaluated independently in double precision from the closed-form expression.
        let p = SystemParams::reference(1);
        let h = channel_coeff(
            &Position::ground(10.0, 2.0),
            &Position::new(7.0, 0.0, 3.0),
            &Position::new(0.0, 0.0, 3.0),
            &p,
        )
        .unwrap();
        assert_relative_eq!(h.re, -0.000_128_510_798_311_791_92, max_relative = 1e-9);
        assert_relative_eq!(h.im, -0.000_128_384_651_860_560_72, max_relative = 1e-9);
    }

    #[test]
    fn coincident_points_are_singular() {
        let p = SystemParams::reference(1);
        let a = Position::new(1.0, 1.0, 3.0);
        assert!(matches!(channel_coeff(&a, &a, &a, &p), Err(Error::SingularChannel)));
    }

    #[test]
    fn vector_entries_follow_layout() {
        let p = SystemParams::reference(1);
        let layout = WaveguideLayout::new(&p, 0.0).unwrap();
        let user = Position::ground(4.0, 9.0);
        let h = channel_vector(&user, &[12.5], &layout, &p).unwrap();
        let direct = channel_coeff(&user, &Position::new(12.5, 0.0, 3.0), &layout.feed_points[0], &p).unwrap();
        assert_eq!(h.0[0], direct);
        assert!(channel_vector(&user, &[1.0, 2.0], &layout, &p).is_err());
        assert!(channel_vector(&user, &[-0.5], &layout, &p).is_err());
    }

    #[test]
    fn symmetric_user_sees_equal_magnitudes() {
        let p = SystemParams::reference(2);
        let layout = WaveguideLayout::new(&p, 0.0).unwrap();
        // Halfway between the two waveguides, both antennas at the same abscissa.
        let h = channel_vector(&Position::ground(8.0, 7.5), &[8.0, 8.0], &layout, &p).unwrap();
        assert_relative_eq!(h.0[0].norm(), h.0[1].norm(), max_relative = 1e-14);
        assert!((h.0[0] - h.0[1]).norm() <= 1e-12 * h.0[0].norm());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn magnitude_times_distance_is_constant(
                ux in 0.0..30.0f64, uy in 0.0..30.0f64,
                px in 0.0..30.0f64, py in 0.0..30.0f64, fx in 0.0..30.0f64,
            ) {
                let p = SystemParams::reference(1);
                let user = Position::ground(ux, uy);
                let pa = Position::new(px, py, 3.0);
                let h = channel_coeff(&user, &pa, &Position::new(fx, py, 3.0), &p).unwrap();
                let lhs = h.norm() * user.distance(&pa);
                prop_assert!((lhs / p.path_loss_constant.sqrt() - 1.0).abs() < 1e-13);
            }

            #[test]
            fn phase_is_periodic_in_wavelengths(k in 1u32..50, m in 1u32..50) {
                let p = SystemParams::reference(1);
                let user = Position::ground(0.0, 0.0);
                let base = channel_coeff(
                    &user, &Position::new(0.0, 0.0, 3.0), &Position::new(0.0, 0.0, 3.0), &p,
                ).unwrap();
                // Extra free-space path of k·λ via height, extra guided path of m·λ_g.
                let z = 3.0 + k as f64 * p.wavelength;
                let shifted = channel_coeff(
                    &user,
                    &Position::new(0.0, 0.0, z),
                    &Position::new(-(m as f64) * p.guided_wavelength, 0.0, z),
                    &p,
                ).unwrap();
                let rot = (shifted / shifted.norm()) / (base / base.norm());
                prop_assert!((rot - Complex64::new(1.0, 0.0)).norm() < 1e-8);
            }
        }
    }
}
