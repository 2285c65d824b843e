//! Physical constants and the handful of SI conversions the engine needs.
//!
//! Internally every quantity is reduced: distances enter as `x = k_A z`,
//! imaginary frequencies as `ξ = ω' z / c`, material frequencies as ratios to
//! the transition frequency `ω_A`. SI values only cross this module.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// CODATA 2018 values in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Speed of light, m/s.
    pub c: f64,
    /// Vacuum permeability, N/A².
    pub mu0: f64,
    /// Vacuum permittivity, F/m. Derived as 1/(μ₀c²).
    pub eps0: f64,
    /// Bohr magneton, J/T.
    pub mu_b: f64,
    /// Electron spin g-factor (magnitude).
    pub g_s: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Joules per electronvolt.
    pub ev: f64,
    /// Electron mass, kg.
    pub m_e: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        let mu0 = 1.256_637_062_12e-6;
        let c = 299_792_458.0;
        Self {
            hbar: 1.054_571_817e-34,
            c,
            mu0,
            eps0: 1.0 / (mu0 * c * c),
            mu_b: 9.274_010_078_3e-24,
            g_s: 2.002_319,
            k_b: 1.380_649e-23,
            ev: 1.602_176_634e-19,
            m_e: 9.109_383_701_5e-31,
        }
    }
}

impl PhysicalConstants {
    /// Same constants with a different electron g-factor.
    pub fn with_g_factor(mut self, g_s: f64) -> Self {
        self.g_s = g_s;
        self
    }

    /// Magnitude of the spin magnetic moment scale μ_B g_S, J/T.
    pub fn spin_moment(&self) -> f64 {
        self.mu_b * self.g_s
    }

    /// Reduced electron Compton wavelength ħ/(m_e c), m.
    pub fn compton_wavelength(&self) -> f64 {
        self.hbar / (self.m_e * self.c)
    }

    /// Wavenumber k = ω/c.
    pub fn wavenumber(&self, omega: f64) -> f64 {
        omega / self.c
    }
}

/// Unit tag for [`to_angular_frequency`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyUnit {
    /// An energy ħω given in electronvolts.
    ElectronVolt,
    /// An ordinary frequency ν given in hertz.
    Hertz,
}

/// Converts an energy in eV or a frequency in Hz to angular frequency in rad/s.
pub fn to_angular_frequency(value: f64, unit: FrequencyUnit, consts: &PhysicalConstants) -> Result<f64> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::domain(format!("frequency input must be positive, got {value}")));
    }
    Ok(match unit {
        FrequencyUnit::ElectronVolt => value * consts.ev / consts.hbar,
        FrequencyUnit::Hertz => 2.0 * PI * value,
    })
}

/// Angular frequency (rad/s) back to an energy in eV.
pub fn angular_frequency_to_ev(omega: f64, consts: &PhysicalConstants) -> f64 {
    omega * consts.hbar / consts.ev
}

/// μ₀(μ_B g_S)²/(32π z⁴) in newtons: multiplies the rescaled magnetic force `F_M`.
pub fn force_prefactor_magnetic(z: f64, consts: &PhysicalConstants) -> Result<f64> {
    check_distance(z)?;
    let m = consts.spin_moment();
    Ok(consts.mu0 * m * m / (32.0 * PI * z.powi(4)))
}

/// |d|²/(32π ε₀ z⁴) in newtons for an electric dipole of magnitude `dipole` (C·m).
///
/// This is μ₀c²|d|²/(32π z⁴); the extra c² relative to the magnetic prefactor
/// carries the field-strength conversion so the result is a force.
pub fn force_prefactor_electric(z: f64, dipole: f64, consts: &PhysicalConstants) -> Result<f64> {
    check_distance(z)?;
    Ok(dipole * dipole / (32.0 * PI * consts.eps0 * z.powi(4)))
}

pub(crate) fn check_distance(z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("atom-surface distance must be positive, got {z}")));
    }
    Ok(())
}

/// Dimensionless variables shared by the reduced formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedVariables {
    /// k_A z.
    pub x: f64,
    /// ω_p / ω_A.
    pub alpha: f64,
    /// ν / ω_A.
    pub nu_bar: f64,
    /// Δ / ħω.
    pub q: f64,
}

impl ReducedVariables {
    pub fn new(x: f64, alpha: f64, nu_bar: f64, q: f64) -> Result<Self> {
        if !(x > 0.0) {
            return Err(Error::domain(format!("k_A z must be positive, got {x}")));
        }
        if !(alpha >= 0.0) || !(nu_bar >= 0.0) {
            return Err(Error::domain("alpha and nu_bar must be non-negative"));
        }
        if !(q > 0.0) {
            return Err(Error::domain(format!("q must be positive, got {q}")));
        }
        Ok(Self { x, alpha, nu_bar, q })
    }

    /// Reduced variables of a transition at `omega_a` (rad/s) and distance `z` (m).
    pub fn from_si(z: f64, omega_a: f64, omega_p: f64, nu: f64, consts: &PhysicalConstants) -> Result<Self> {
        check_distance(z)?;
        if !(omega_a > 0.0) {
            return Err(Error::domain("transition frequency must be positive"));
        }
        Self::new(omega_a * z / consts.c, omega_p / omega_a, nu / omega_a, f64::INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_constants_are_consistent() {
        let k = PhysicalConstants::default();
        assert_relative_eq!(k.eps0 * k.mu0 * k.c * k.c, 1.0, max_relative = 1e-12);
        for v in [k.hbar, k.c, k.mu0, k.eps0, k.mu_b, k.g_s, k.k_b, k.ev, k.m_e] {
            assert!(v > 0.0);
        }
    }

    #[test]
    fn electronvolt_conversion() {
        let k = PhysicalConstants::default();
        let w = to_angular_frequency(9.0, FrequencyUnit::ElectronVolt, &k).unwrap();
        // 9 eV / ħ with CODATA 2018
        assert_relative_eq!(w, 1.367_340_703_928_559_5e16, max_relative = 1e-12);
        assert_relative_eq!(angular_frequency_to_ev(w, &k), 9.0, max_relative = 1e-14);
    }

    #[test]
    fn hertz_conversion() {
        let k = PhysicalConstants::default();
        let w = to_angular_frequency(560e3, FrequencyUnit::Hertz, &k).unwrap();
        assert_relative_eq!(w, 2.0 * PI * 5.6e5, max_relative = 1e-15);
    }

    #[test]
    fn non_positive_frequency_is_rejected() {
        let k = PhysicalConstants::default();
        assert!(matches!(
            to_angular_frequency(0.0, FrequencyUnit::ElectronVolt, &k),
            Err(Error::Domain(_))
        ));
        assert!(to_angular_frequency(-3.0, FrequencyUnit::Hertz, &k).is_err());
    }

    #[test]
    fn magnetic_prefactor_scaling_and_value() {
        let k = PhysicalConstants::default();
        let p1 = force_prefactor_magnetic(1e-6, &k).unwrap();
        // μ₀(μ_B g_S)²/(32π (1 µm)⁴), evaluated once by hand
        assert_relative_eq!(p1, 4.310_341_472_685_26e-30, max_relative = 1e-12);
        let p2 = force_prefactor_magnetic(2e-6, &k).unwrap();
        assert_relative_eq!(p1 / p2, 16.0, max_relative = 1e-14);
        assert!(force_prefactor_magnetic(0.0, &k).is_err());
        assert!(force_prefactor_magnetic(-1e-6, &k).is_err());
    }

    #[test]
    fn prefactor_times_z4_is_constant() {
        let k = PhysicalConstants::default();
        let reference = force_prefactor_magnetic(1.0, &k).unwrap();
        for z in [1e-9, 3.7e-8, 1e-6, 2.5e-4, 0.1] {
            let v = force_prefactor_magnetic(z, &k).unwrap() * z.powi(4);
            assert_relative_eq!(v, reference, max_relative = 1e-12);
        }
    }

    #[test]
    fn conversion_is_linear_and_monotone() {
        let k = PhysicalConstants::default();
        for unit in [FrequencyUnit::ElectronVolt, FrequencyUnit::Hertz] {
            let a = to_angular_frequency(1.5, unit, &k).unwrap();
            let b = to_angular_frequency(3.0, unit, &k).unwrap();
            assert!(b > a);
            assert_relative_eq!(b, 2.0 * a, max_relative = 1e-15);
        }
    }

    #[test]
    fn reduced_variables_validate() {
        assert!(ReducedVariables::new(1.0, 1.0, 0.0, 1.0).is_ok());
        assert!(ReducedVariables::new(0.0, 1.0, 0.0, 1.0).is_err());
        assert!(ReducedVariables::new(1.0, -1.0, 0.0, 1.0).is_err());
        assert!(ReducedVariables::new(1.0, 1.0, 0.0, 0.0).is_err());
    }
}
