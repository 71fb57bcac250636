//! Tip-loaded rectangular cantilever sizing.
//!
//! Closed forms for tip deflection, root bending stress and the hard-stop
//! deflection at which the root stress reaches the allowable stress, plus a
//! finite-difference Euler–Bernoulli solver used to cross-check them.

use alloc::string::String;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod fd;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BeamError {
    #[error("applied force must be finite and non-negative, got {0} N")]
    NegativeForce(f64),
    #[error("{field} must be finite and positive, got {value}")]
    NonPositive { field: &'static str, value: f64 },
    #[error("allowable stress {sigma_max} Pa exceeds half the tensile strength ({half} Pa)")]
    SigmaTooHigh { sigma_max: f64, half: f64 },
    #[error("material {0:?} has no values; supply E_pa and tensile_strength_pa")]
    MissingValues(String),
}

fn positive(field: &'static str, value: f64) -> Result<f64, BeamError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(BeamError::NonPositive { field, value })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    /// Young's modulus, Pa.
    #[serde(rename = "E_pa")]
    pub youngs_modulus: f64,
    /// Ultimate tensile strength, Pa.
    #[serde(rename = "tensile_strength_pa")]
    pub tensile_strength: f64,
}

impl Material {
    pub fn new(name: impl Into<String>, youngs_modulus: f64, tensile_strength: f64) -> Result<Self, BeamError> {
        let m = Self { name: name.into(), youngs_modulus, tensile_strength };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), BeamError> {
        positive("E_pa", self.youngs_modulus)?;
        positive("tensile_strength_pa", self.tensile_strength)?;
        Ok(())
    }

    /// Allowable stress with a factor of safety of two.
    pub fn default_sigma_max(&self) -> f64 {
        0.5 * self.tensile_strength
    }
}

/// Rectangular cantilever of length `length`, thickness `thickness` (in the
/// bending direction) and width `width`, all in metres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamSpec {
    pub length: f64,
    pub thickness: f64,
    pub width: f64,
    pub material: Material,
    /// Allowable root stress, Pa.
    pub sigma_max: f64,
}

impl BeamSpec {
    /// Builds a spec with `sigma_max` at half the tensile strength.
    pub fn new(length: f64, thickness: f64, width: f64, material: Material) -> Result<Self, BeamError> {
        let sigma_max = material.default_sigma_max();
        Self::with_sigma_max(length, thickness, width, material, sigma_max)
    }

    pub fn with_sigma_max(
        length: f64,
        thickness: f64,
        width: f64,
        material: Material,
        sigma_max: f64,
    ) -> Result<Self, BeamError> {
        let spec = Self { length, thickness, width, material, sigma_max };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), BeamError> {
        positive("length", self.length)?;
        positive("thickness", self.thickness)?;
        positive("width", self.width)?;
        self.material.validate()?;
        positive("sigma_max", self.sigma_max)?;
        let half = self.material.default_sigma_max();
        if self.sigma_max > half {
            return Err(BeamError::SigmaTooHigh { sigma_max: self.sigma_max, half });
        }
        Ok(())
    }

    /// Second moment of area `b t^3 / 12`, m^4.
    pub fn second_moment(&self) -> f64 {
        self.width * self.thickness * self.thickness * self.thickness / 12.0
    }

    /// Bending stiffness `E I`, N m^2.
    pub fn flexural_rigidity(&self) -> f64 {
        self.material.youngs_modulus * self.second_moment()
    }
}

fn check_force(force: f64) -> Result<(), BeamError> {
    if force.is_finite() && force >= 0.0 {
        Ok(())
    } else {
        Err(BeamError::NegativeForce(force))
    }
}

/// Tip deflection `F L^3 / (3 E I)`, m.
pub fn deflection(spec: &BeamSpec, force: f64) -> Result<f64, BeamError> {
    check_force(force)?;
    let l = spec.length;
    Ok(force * l * l * l / (3.0 * spec.flexural_rigidity()))
}

/// Root bending stress `F L t / (2 I)`, Pa.
pub fn root_stress(spec: &BeamSpec, force: f64) -> Result<f64, BeamError> {
    check_force(force)?;
    Ok(force * spec.length * spec.thickness / (2.0 * spec.second_moment()))
}

/// Tip force at which the root stress reaches `sigma_max`.
pub fn force_at_sigma_max(spec: &BeamSpec) -> f64 {
    2.0 * spec.second_moment() * spec.sigma_max / (spec.length * spec.thickness)
}

/// Largest elastic tip deflection, `(2/3) sigma_max L^2 / (E t)`, m.
pub fn hard_stop_deflection(spec: &BeamSpec) -> f64 {
    let l = spec.length;
    2.0 / 3.0 * spec.sigma_max * l * l / (spec.material.youngs_modulus * spec.thickness)
}

/// Hard-stop rotation of a rigid link of the beam's length, rad.
pub fn hard_stop_angle(spec: &BeamSpec) -> f64 {
    crate::math::atan(hard_stop_deflection(spec) / spec.length)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeflectionReport {
    /// Applied tip force, N.
    #[serde(rename = "F")]
    pub force: f64,
    /// Tip deflection under `force`, m.
    pub delta: f64,
    /// Root stress under `force`, Pa.
    pub sigma: f64,
    /// Hard-stop deflection, m.
    pub delta_max: f64,
    pub within_elastic: bool,
}

pub fn design_report(spec: &BeamSpec, force: f64) -> Result<DeflectionReport, BeamError> {
    spec.validate()?;
    let delta = deflection(spec, force)?;
    let sigma = root_stress(spec, force)?;
    Ok(DeflectionReport {
        force,
        delta,
        sigma,
        delta_max: hard_stop_deflection(spec),
        within_elastic: sigma <= spec.sigma_max,
    })
}
