//! Physical parameters, unit conventions and derived constants.
//!
//! Conventions: SI units (meters, rad/s, kg) in double precision. The cavity
//! medium is taken non-magnetic, `μ = 1` and `ε = n²`, so the impedance is
//! `Z = 1/n`. Band energies are reported as reduced frequencies
//! `Δω = ω − ω_z` with the constant paraxial offset `ω_z = m0 c²/(n²ħ)`
//! subtracted.

use crate::error::Error;
use crate::Result;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Reduced Planck constant, J·s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Input description of the patterned-mirror microcavity lattice.
///
/// The mirror reflectivity is `R1 = exp(iφ(x,y))` with `φ = Δφ` on square
/// pixels of area `FF·Λ²` and `φ = 0` on the separating grid; `Ω` is the
/// rotation rate about the cavity axis `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParameters {
    /// Vacuum wavelength λ (m).
    pub wavelength: f64,
    /// Refractive index n of the cavity medium (dimensionless).
    pub refractive_index: f64,
    /// Lattice pitch Λ of the reflectivity pattern (m).
    pub pitch: f64,
    /// Fill factor FF: pixel area over unit-cell area.
    pub fill_factor: f64,
    /// Phase contrast Δφ of the pattern (rad).
    pub phase_contrast: f64,
    /// Rotation rate Ω about the z axis (rad/s).
    pub rotation_rate: f64,
}

impl Default for PhysicalParameters {
    /// Reference configuration: λ=960 nm, n=3.53, Λ=4 μm, FF=0.65, Δφ=0.02,
    /// not rotating.
    fn default() -> Self {
        Self {
            wavelength: 960e-9,
            refractive_index: 3.53,
            pitch: 4e-6,
            fill_factor: 0.65,
            phase_contrast: 0.02,
            rotation_rate: 0.0,
        }
    }
}

impl PhysicalParameters {
    /// Check the hard invariants; log a warning for soft validity limits
    /// (`|Δφ| > 0.1`, or `Λ < 5 λ/n` where the paraxial separation of scales
    /// degrades).
    pub fn validate(&self) -> Result<()> {
        fn finite_positive(name: &'static str, value: f64) -> Result<()> {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    message: format!("must be finite and > 0, got {value:e}"),
                });
            }
            Ok(())
        }
        finite_positive("wavelength", self.wavelength)?;
        finite_positive("pitch", self.pitch)?;
        if !(self.refractive_index.is_finite() && self.refractive_index >= 1.0) {
            return Err(Error::InvalidParameter {
                name: "refractive_index",
                message: format!("must be >= 1, got {:e}", self.refractive_index),
            });
        }
        if !(self.fill_factor > 0.0 && self.fill_factor < 1.0) {
            return Err(Error::InvalidParameter {
                name: "fill_factor",
                message: format!("must lie strictly in (0, 1), got {:e}", self.fill_factor),
            });
        }
        if !self.phase_contrast.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phase_contrast",
                message: "must be finite".to_owned(),
            });
        }
        if !self.rotation_rate.is_finite() {
            return Err(Error::InvalidParameter {
                name: "rotation_rate",
                message: "must be finite".to_owned(),
            });
        }
        if self.phase_contrast.abs() > 0.1 {
            log::warn!(
                "phase contrast |Δφ| = {:e} exceeds 0.1; the low-contrast expansion degrades",
                self.phase_contrast.abs()
            );
        }
        let paraxial_pitch = 5.0 * self.wavelength / self.refractive_index;
        if self.pitch < paraxial_pitch {
            log::warn!(
                "pitch {:e} m below 5·λ/n = {:e} m; paraxial validity is marginal",
                self.pitch,
                paraxial_pitch
            );
        }
        Ok(())
    }
}

/// Constants derived from [`PhysicalParameters`]; see [`derive_constants`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// Cavity length l_z = λ/n (m); one wavelength in the medium.
    pub cavity_length: f64,
    /// Longitudinal wavenumber k_z = 2πn/λ (1/m).
    pub longitudinal_wavenumber: f64,
    /// Photon mass m0 = nħk_z/c (kg) of the transverse dynamics.
    pub photon_mass: f64,
    /// Offset frequency ω_z = c k_z/n = m0c²/(n²ħ) (rad/s), subtracted from
    /// all band outputs.
    pub offset_frequency: f64,
    /// Interband momentum matrix element P = ħπ/(√2 Λ) (kg·m/s).
    pub momentum_element: f64,
    /// Impedance Z = 1/n (dimensionless, μ=1, ε=n²).
    pub impedance: f64,
}

impl DerivedConstants {
    /// Kinetic frequency scale ħ(π/Λ)²/m0 (rad/s), used for degeneracy
    /// clustering and tolerance normalization.
    pub fn kinetic_scale(&self, pitch: f64) -> f64 {
        let k = std::f64::consts::PI / pitch;
        HBAR * k * k / self.photon_mass
    }
}

/// A band frequency with the constant paraxial offset removed:
/// `Δω = ω − ω_z` in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ReducedEnergy(pub f64);

impl ReducedEnergy {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Compute the derived constants for a validated parameter set.
///
/// Pure: identical inputs give bit-identical outputs.
pub fn derive_constants(p: &PhysicalParameters) -> Result<DerivedConstants> {
    p.validate()?;
    let k_z = 2.0 * std::f64::consts::PI * p.refractive_index / p.wavelength;
    Ok(DerivedConstants {
        cavity_length: p.wavelength / p.refractive_index,
        longitudinal_wavenumber: k_z,
        photon_mass: p.refractive_index * HBAR * k_z / SPEED_OF_LIGHT,
        offset_frequency: SPEED_OF_LIGHT * k_z / p.refractive_index,
        momentum_element: HBAR * std::f64::consts::PI / (std::f64::consts::SQRT_2 * p.pitch),
        impedance: 1.0 / p.refractive_index,
    })
}
