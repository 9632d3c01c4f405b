//! Planar multi-slit geometry: exact slit-to-detector path lengths and phases.
//!
//! Slits sit on a line at transverse coordinates `y_i`; the detection plane is
//! a distance `D` downstream. The detector at transverse coordinate `d` is a
//! distance `r_i = sqrt(D² + (d − y_i)²)` from slit `i`. No paraxial or
//! far-field approximation is made.
//!
//! The source is taken to illuminate every slit with the same delay, so only
//! the slit-to-detector leg enters the phase `φ_i = ω(t − r_i/c)`. The common
//! `ωt` cancels in every phase difference.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Transverse position on the detection plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DetectorCoordinate(pub f64);

impl DetectorCoordinate {
    pub fn new(d: f64) -> Result<Self> {
        if !d.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "detector coordinate {d} is not finite"
            )));
        }
        Ok(Self(d))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for DetectorCoordinate {
    fn from(d: f64) -> Self {
        Self(d)
    }
}

/// Slit layout, screen distance and wavelength of a Young interferometer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlitGeometry {
    slit_positions: Vec<f64>,
    screen_distance: f64,
    wavelength: f64,
}

impl SlitGeometry {
    /// Wavelength, adjacent slit spacing and screen distance used for the
    /// reference three-slit configuration (meters).
    pub const REFERENCE_WAVELENGTH: f64 = 0.05;
    pub const REFERENCE_SLIT_SPACING: f64 = 0.13;
    pub const REFERENCE_SCREEN_DISTANCE: f64 = 1.25;

    pub fn new(slit_positions: Vec<f64>, screen_distance: f64, wavelength: f64) -> Result<Self> {
        if !(screen_distance.is_finite() && screen_distance > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "screen distance must be positive and finite, got {screen_distance}"
            )));
        }
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "wavelength must be positive and finite, got {wavelength}"
            )));
        }
        if slit_positions.is_empty() {
            return Err(Error::InvalidGeometry(
                "at least one slit is required".into(),
            ));
        }
        if let Some(y) = slit_positions.iter().find(|y| !y.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "slit position {y} is not finite"
            )));
        }
        if slit_positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGeometry(
                "slit positions must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            slit_positions,
            screen_distance,
            wavelength,
        })
    }

    /// Three equally spaced slits at `{−l, 0, +l}`.
    pub fn three_slit(slit_spacing: f64, screen_distance: f64, wavelength: f64) -> Result<Self> {
        if !(slit_spacing.is_finite() && slit_spacing > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "slit spacing must be positive and finite, got {slit_spacing}"
            )));
        }
        Self::new(
            vec![-slit_spacing, 0.0, slit_spacing],
            screen_distance,
            wavelength,
        )
    }

    /// The λ = 0.05 m, l = 0.13 m, D = 1.25 m three-slit layout.
    pub fn reference() -> Self {
        Self::three_slit(
            Self::REFERENCE_SLIT_SPACING,
            Self::REFERENCE_SCREEN_DISTANCE,
            Self::REFERENCE_WAVELENGTH,
        )
        .expect("reference geometry is valid")
    }

    pub fn slit_positions(&self) -> &[f64] {
        &self.slit_positions
    }

    pub fn slit_count(&self) -> usize {
        self.slit_positions.len()
    }

    pub fn screen_distance(&self) -> f64 {
        self.screen_distance
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn wave_number(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Angular frequency ω = c·k.
    pub fn angular_frequency(&self) -> f64 {
        SPEED_OF_LIGHT * self.wave_number()
    }

    fn slit_position(&self, slit: usize) -> Result<f64> {
        self.slit_positions
            .get(slit)
            .copied()
            .ok_or(Error::SlitOutOfRange {
                index: slit,
                count: self.slit_count(),
            })
    }

    /// Euclidean in-plane distance from slit `slit` to the detector.
    pub fn path_length(&self, slit: usize, d: DetectorCoordinate) -> Result<f64> {
        let y = self.slit_position(slit)?;
        Ok(self.screen_distance.hypot(d.0 - y))
    }

    /// `φ_i − φ_j = k (r_j − r_i)`.
    pub fn phase_difference(&self, i: usize, j: usize, d: DetectorCoordinate) -> Result<f64> {
        let r_i = self.path_length(i, d)?;
        let r_j = self.path_length(j, d)?;
        Ok(self.wave_number() * (r_j - r_i))
    }

    /// Relative phase `φ_i = −k r_i` of slit `i` (the common `ωt` dropped).
    pub fn phase(&self, slit: usize, d: DetectorCoordinate) -> Result<f64> {
        Ok(-self.wave_number() * self.path_length(slit, d)?)
    }
}

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
