//! Physical constants, the field-to-coupling conversion, and the design
//! formulas for electric spin twisters.
//!
//! Everything downstream works in scaled units with `2m/hbar^2 = 1`, so the
//! only dimensional inputs are the gyromagnetic ratio `gamma` (rad s^-1 T^-1),
//! the speed of light `c` (m/s), and the electric field `E` (V/m). They enter
//! through the single coupling constant `C = gamma E / c^2` with units 1/m.

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Magnitude of the neutron gyromagnetic ratio, rad s^-1 T^-1 (CODATA).
pub const NEUTRON_GYROMAGNETIC_RATIO: f64 = 1.832_471_71e8;

/// Particle species behind a [`PhysicsContext`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Particle {
    Neutron,
    Custom,
}

/// Immutable bundle of the dimensional constants a simulation run uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicsContext {
    particle: Particle,
    gyromagnetic_ratio: f64,
    speed_of_light: f64,
}

impl PhysicsContext {
    /// Context for neutrons with CODATA constants.
    pub fn neutron() -> Self {
        PhysicsContext {
            particle: Particle::Neutron,
            gyromagnetic_ratio: NEUTRON_GYROMAGNETIC_RATIO,
            speed_of_light: SPEED_OF_LIGHT,
        }
    }

    /// Context for an arbitrary neutral spin-1/2 particle.
    pub fn custom(gyromagnetic_ratio: f64, speed_of_light: f64) -> Result<Self> {
        if !(speed_of_light > 0.0) || !speed_of_light.is_finite() {
            return Err(Error::Domain(format!(
                "speed of light must be positive and finite, got {speed_of_light}"
            )));
        }
        if gyromagnetic_ratio == 0.0 || !gyromagnetic_ratio.is_finite() {
            return Err(Error::Domain(format!(
                "gyromagnetic ratio must be nonzero and finite, got {gyromagnetic_ratio}"
            )));
        }
        Ok(PhysicsContext {
            particle: Particle::Custom,
            gyromagnetic_ratio,
            speed_of_light,
        })
    }

    pub fn particle(&self) -> Particle {
        self.particle
    }

    pub fn gyromagnetic_ratio(&self) -> f64 {
        self.gyromagnetic_ratio
    }

    pub fn speed_of_light(&self) -> f64 {
        self.speed_of_light
    }

    /// Spin-orbit coupling constant `C = gamma E / c^2` for a uniform field
    /// of `field_strength` V/m. Carries the sign of `gamma E`.
    pub fn coupling_constant(&self, field_strength: f64) -> CouplingConstant {
        let c = self.speed_of_light;
        CouplingConstant {
            value: self.gyromagnetic_ratio * field_strength / (c * c),
            field_strength,
        }
    }

    /// Electrode voltage that fully converts spin to orbital angular
    /// momentum in a wedge twister with opening half-angle `alpha`:
    /// `V = pi c^2 / (gamma alpha)`.
    ///
    /// `alpha` must be positive; the small-angle geometry has no meaning
    /// otherwise.
    pub fn full_twist_voltage(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "wedge half-angle must be positive and finite, got {alpha} rad"
            )));
        }
        let c = self.speed_of_light;
        Ok(std::f64::consts::PI * c * c / (self.gyromagnetic_ratio * alpha))
    }

    /// Spin-flip (equivalently OAM-conversion) amplitude `|sin(C L / 2)|`
    /// accumulated over a device of length `length` at `field_strength`.
    ///
    /// The rotation angle follows from the coupling acting for the traversal
    /// time of a slab of length `length` at the beam's group velocity.
    pub fn twister_amplitude(&self, field_strength: f64, length: f64) -> Result<f64> {
        if !(length >= 0.0) || !length.is_finite() {
            return Err(Error::Domain(format!(
                "device length must be >= 0, got {length} m"
            )));
        }
        let c = self.coupling_constant(field_strength).value;
        Ok((0.5 * c * length).sin().abs())
    }
}

/// Spin-orbit coupling constant `C` (1/m) tagged with the field that
/// produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingConstant {
    value: f64,
    field_strength: f64,
}

impl CouplingConstant {
    /// The coupling in 1/m.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// The electric field (V/m) this coupling corresponds to.
    pub fn field_strength(&self) -> f64 {
        self.field_strength
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_scales_linearly_with_field() {
        let ctx = PhysicsContext::neutron();
        let c1 = ctx.coupling_constant(1e8).value();
        let c2 = ctx.coupling_constant(2e8).value();
        assert!((c2 - 2.0 * c1).abs() < 1e-18);
        // gamma E / c^2 at E = 1e8 V/m.
        let want = NEUTRON_GYROMAGNETIC_RATIO * 1e8 / (SPEED_OF_LIGHT * SPEED_OF_LIGHT);
        assert!((c1 - want).abs() < 1e-18 && (want - 0.2039).abs() < 5e-4);
        // Sign follows the field direction.
        assert!(ctx.coupling_constant(-1e8).value() < 0.0);
    }

    #[test]
    fn full_twist_voltage_for_one_degree_wedge() {
        let ctx = PhysicsContext::neutron();
        let alpha = 1.0f64.to_radians();
        let v = ctx.full_twist_voltage(alpha).unwrap();
        // pi c^2 / (gamma * 1 deg) = 88.3 GV to three digits.
        assert!((v - 8.828e10).abs() < 5e7, "got {v}");
        assert!(ctx.full_twist_voltage(0.0).is_err());
        assert!(ctx.full_twist_voltage(-0.1).is_err());
    }

    #[test]
    fn twister_amplitude_is_small_and_linear_at_weak_fields() {
        let ctx = PhysicsContext::neutron();
        let a = ctx.twister_amplitude(1e8, 1.0).unwrap();
        assert!((a - 0.1018).abs() < 5e-4, "got {a}");
        // Linear regime: a(E) ~ E for C L << 1, up to the cubic sine term.
        let a_half = ctx.twister_amplitude(5e7, 1.0).unwrap();
        assert!((a - 2.0 * a_half).abs() < 2e-3 * a);
        assert!(ctx.twister_amplitude(1e8, -1.0).is_err());
        assert_eq!(ctx.twister_amplitude(1e8, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn custom_context_validates_constants() {
        assert!(PhysicsContext::custom(0.0, SPEED_OF_LIGHT).is_err());
        assert!(PhysicsContext::custom(1.0, 0.0).is_err());
        assert!(PhysicsContext::custom(1.0, -1.0).is_err());
        let ctx = PhysicsContext::custom(-2.0, 1.0).unwrap();
        assert_eq!(ctx.particle(), Particle::Custom);
        // Negative gamma flips the coupling sign.
        assert!(ctx.coupling_constant(1.0).value() < 0.0);
    }
}
