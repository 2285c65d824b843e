//! Dielectric response of the slab.
//!
//! Every model is evaluated on the positive imaginary frequency axis through
//! its *scaled susceptibility* `S(ω) = ω²(ε(iω) − 1)`. `S` stays finite as
//! `ω → 0` even for conductors (plasma: `S = ω_p²`), which is what the reduced
//! force integrands need. Real-axis ε(ω) is available for the models that have
//! a closed form there.

mod mattis_bardeen;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_adaptive, QuadratureSpec, SingularEndpoints, TailPolicy, Upper};
use crate::units::PhysicalConstants;

pub use mattis_bardeen::{f_impurity, sigma_clean_reduced, sigma_impure_reduced, ComplexConductivity};

/// One Lorentz term `f / (ω² + ω_j² + g ω)` of the six-oscillator model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oscillator {
    /// Strength f_j, rad²/s².
    pub strength: f64,
    /// Resonance ω_j, rad/s.
    pub omega: f64,
    /// Damping g_j, rad/s.
    pub damping: f64,
}

/// BCS superconductor described by the Mattis–Bardeen conductivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superconductor {
    /// Gap Δ/ħ, rad/s.
    pub gap: f64,
    /// ω_sp with ω_sp² = πσ_nΔ/(ε₀ħ), rad/s.
    pub omega_sp: f64,
    /// ħ/(τΔ); `None` is the infinite-τ limit.
    pub impurity: Option<f64>,
}

impl Superconductor {
    /// From the gap Δ (J), normal-state conductivity σ_n (S/m) and relaxation
    /// time τ (s, `None` for τ → ∞).
    pub fn from_conductivity(delta: f64, sigma_n: f64, tau: Option<f64>, consts: &PhysicalConstants) -> Result<Self> {
        if !(delta > 0.0) || !(sigma_n >= 0.0) {
            return Err(Error::domain("superconductor needs Δ > 0 and σ_n ≥ 0"));
        }
        let impurity = match tau {
            None => None,
            Some(t) if t > 0.0 => Some(consts.hbar / (t * delta)),
            Some(t) => return Err(Error::domain(format!("relaxation time must be positive, got {t}"))),
        };
        Ok(Self {
            gap: delta / consts.hbar,
            omega_sp: (PI * sigma_n * delta / (consts.eps0 * consts.hbar)).sqrt(),
            impurity,
        })
    }

    /// Weight of the `1/ω²` pole: ω_sp², reduced by `1 − f(ħ/τΔ)` with impurities.
    pub fn pole_weight(&self) -> Result<f64> {
        let reduction = match self.impurity {
            None => 1.0,
            Some(b) => 1.0 - f_impurity(b)?,
        };
        Ok(self.omega_sp * self.omega_sp * reduction)
    }

    /// `(2/π) ∫ dx x ε₂(x)/(x² + ω²)` over `ħx ≥ 2Δ`, with ε₂ = σ₁/(ε₀x).
    ///
    /// In gap units this is `(2/π²)(ω_sp/ω_Δ)² ∫₂^∞ dw s₁(w)/(w² + Ω²)`,
    /// `Ω = ω/ω_Δ`. `s₁ ≤ 1` bounds the integrand by `1/w²`.
    pub fn continuum(&self, omega: f64, spec: &QuadratureSpec) -> Result<f64> {
        if self.omega_sp == 0.0 {
            return Ok(0.0);
        }
        let big_omega = omega / self.gap;
        let inner = spec.nested();
        let tail_spec = spec.with_tail(TailPolicy::PowerBound { majorant: 1.0 });
        let integrand = |w: f64| match mattis_bardeen::sigma1_reduced(w, self.impurity, &inner) {
            Ok(s1) => s1 / (w * w + big_omega * big_omega),
            Err(_) => f64::NAN,
        };
        let r = integrate_adaptive(integrand, 2.0, Upper::Infinite, &tail_spec, SingularEndpoints::NONE);
        let ratio = self.omega_sp / self.gap;
        Ok(2.0 / (PI * PI) * ratio * ratio * r.require("superconductor continuum", &tail_spec)?)
    }
}

/// Material response models.
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialModel {
    Vacuum,
    /// Handled by exact scattering coefficients, never through ε.
    PerfectConductor,
    Plasma { omega_p: f64 },
    Drude { omega_p: f64, nu: f64 },
    /// `1 + ω_p²/ω² + Σ f_j/(ω² + ω_j² + g_j ω)`.
    SixOscillator { omega_p: f64, oscillators: Vec<Oscillator> },
    /// `1 + ω_p1²/(ω² + ω_1²) + ω_p2²/(ω² + ω_2²)`.
    TwoPlateau { omega_p1: f64, omega_p2: f64, omega_1: f64, omega_2: f64 },
    SuperconductorMB(Superconductor),
}

impl MaterialModel {
    pub fn name(&self) -> &'static str {
        match self {
            MaterialModel::Vacuum => "vacuum",
            MaterialModel::PerfectConductor => "perfect-conductor",
            MaterialModel::Plasma { .. } => "plasma",
            MaterialModel::Drude { .. } => "drude",
            MaterialModel::SixOscillator { .. } => "six-oscillator",
            MaterialModel::TwoPlateau { .. } => "two-plateau",
            MaterialModel::SuperconductorMB(_) => "superconductor-mb",
        }
    }

    /// Gold as a Drude metal: ħω_p = 9.0 eV, ħν = 35 meV.
    pub fn gold_drude(consts: &PhysicalConstants) -> Self {
        let ev = consts.ev / consts.hbar;
        MaterialModel::Drude { omega_p: 9.0 * ev, nu: 0.035 * ev }
    }

    /// Two-plateau sapphire: 0.16, 30.8, 0.07 and 20.8 eV.
    pub fn sapphire(consts: &PhysicalConstants) -> Self {
        let ev = consts.ev / consts.hbar;
        MaterialModel::TwoPlateau { omega_p1: 0.16 * ev, omega_p2: 30.8 * ev, omega_1: 0.07 * ev, omega_2: 20.8 * ev }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("{what} must be positive and finite, got {v}")))
            }
        };
        match self {
            MaterialModel::Vacuum | MaterialModel::PerfectConductor => Ok(()),
            MaterialModel::Plasma { omega_p } => positive(*omega_p, "omega_p"),
            MaterialModel::Drude { omega_p, nu } => {
                positive(*omega_p, "omega_p")?;
                if *nu >= 0.0 && nu.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain(format!("nu must be non-negative, got {nu}")))
                }
            }
            MaterialModel::SixOscillator { omega_p, oscillators } => {
                positive(*omega_p, "omega_p")?;
                if oscillators.is_empty() {
                    return Err(Error::domain("six-oscillator model needs its oscillator table"));
                }
                for o in oscillators {
                    positive(o.strength, "oscillator strength")?;
                    positive(o.omega, "oscillator frequency")?;
                    positive(o.damping, "oscillator damping")?;
                }
                Ok(())
            }
            MaterialModel::TwoPlateau { omega_p1, omega_p2, omega_1, omega_2 } => {
                positive(*omega_p1, "omega_p1")?;
                positive(*omega_p2, "omega_p2")?;
                positive(*omega_1, "omega_1")?;
                positive(*omega_2, "omega_2")
            }
            MaterialModel::SuperconductorMB(s) => {
                positive(s.gap, "gap")?;
                if !(s.omega_sp >= 0.0) {
                    return Err(Error::domain("omega_sp must be non-negative"));
                }
                if let Some(b) = s.impurity {
                    positive(b, "ħ/τΔ")?;
                }
                Ok(())
            }
        }
    }

    /// Same model with every frequency divided by `unit`, e.g. the transition
    /// frequency ω_A to get the reduced parameters α = ω_p/ω_A, ν̄ = ν/ω_A.
    pub fn in_units_of(&self, unit: f64) -> Self {
        let s = 1.0 / unit;
        match self {
            MaterialModel::Vacuum => MaterialModel::Vacuum,
            MaterialModel::PerfectConductor => MaterialModel::PerfectConductor,
            MaterialModel::Plasma { omega_p } => MaterialModel::Plasma { omega_p: omega_p * s },
            MaterialModel::Drude { omega_p, nu } => MaterialModel::Drude { omega_p: omega_p * s, nu: nu * s },
            MaterialModel::SixOscillator { omega_p, oscillators } => MaterialModel::SixOscillator {
                omega_p: omega_p * s,
                oscillators: oscillators
                    .iter()
                    .map(|o| Oscillator { strength: o.strength * s * s, omega: o.omega * s, damping: o.damping * s })
                    .collect(),
            },
            MaterialModel::TwoPlateau { omega_p1, omega_p2, omega_1, omega_2 } => MaterialModel::TwoPlateau {
                omega_p1: omega_p1 * s,
                omega_p2: omega_p2 * s,
                omega_1: omega_1 * s,
                omega_2: omega_2 * s,
            },
            MaterialModel::SuperconductorMB(sc) => {
                MaterialModel::SuperconductorMB(Superconductor { gap: sc.gap * s, omega_sp: sc.omega_sp * s, impurity: sc.impurity })
            }
        }
    }

    /// `S(ω) = ω²(ε(iω) − 1)` for `ω ≥ 0`; finite at `ω = 0`.
    pub fn scaled_susceptibility(&self, omega: f64, spec: &QuadratureSpec) -> Result<f64> {
        let w2 = omega * omega;
        Ok(match self {
            MaterialModel::Vacuum => 0.0,
            MaterialModel::PerfectConductor => {
                return Err(Error::UnsupportedModel { operation: "dielectric function", model: "perfect-conductor" })
            }
            MaterialModel::Plasma { omega_p } => omega_p * omega_p,
            MaterialModel::Drude { omega_p, nu } => {
                if omega == 0.0 {
                    if *nu == 0.0 {
                        omega_p * omega_p
                    } else {
                        0.0
                    }
                } else {
                    omega_p * omega_p * omega / (omega + nu)
                }
            }
            MaterialModel::SixOscillator { omega_p, oscillators } => {
                omega_p * omega_p
                    + oscillators.iter().map(|o| o.strength * w2 / (w2 + o.omega * o.omega + o.damping * omega)).sum::<f64>()
            }
            MaterialModel::TwoPlateau { omega_p1, omega_p2, omega_1, omega_2 } => {
                w2 * (omega_p1 * omega_p1 / (w2 + omega_1 * omega_1) + omega_p2 * omega_p2 / (w2 + omega_2 * omega_2))
            }
            MaterialModel::SuperconductorMB(sc) => {
                let pole = sc.pole_weight()?;
                if omega == 0.0 {
                    pole
                } else {
                    pole + w2 * sc.continuum(omega, spec)?
                }
            }
        })
    }

    /// ε(iω) for `ω > 0`.
    pub fn epsilon_imag_axis(&self, omega: f64, spec: &QuadratureSpec) -> Result<f64> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::domain(format!("imaginary frequency must be positive, got {omega}")));
        }
        Ok(1.0 + self.scaled_susceptibility(omega, spec)? / (omega * omega))
    }

    /// ε(ω) at real ω > 0 for the models with a closed real-axis form.
    pub fn epsilon_real_axis(&self, omega: f64) -> Result<Complex64> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::domain(format!("frequency must be positive, got {omega}")));
        }
        let w2 = omega * omega;
        match self {
            MaterialModel::Vacuum => Ok(Complex64::new(1.0, 0.0)),
            MaterialModel::Plasma { omega_p } => Ok(Complex64::new(1.0 - omega_p * omega_p / w2, 0.0)),
            MaterialModel::Drude { omega_p, nu } => {
                Ok(Complex64::new(1.0, 0.0) - omega_p * omega_p / (omega * Complex64::new(omega, *nu)))
            }
            MaterialModel::SixOscillator { omega_p, oscillators } => {
                let mut eps = Complex64::new(1.0 - omega_p * omega_p / w2, 0.0);
                for o in oscillators {
                    eps += o.strength / Complex64::new(o.omega * o.omega - w2, -o.damping * omega);
                }
                Ok(eps)
            }
            MaterialModel::TwoPlateau { omega_p1, omega_p2, omega_1, omega_2 } => Ok(Complex64::new(
                1.0 + omega_p1 * omega_p1 / (omega_1 * omega_1 - w2) + omega_p2 * omega_p2 / (omega_2 * omega_2 - w2),
                0.0,
            )),
            MaterialModel::PerfectConductor | MaterialModel::SuperconductorMB(_) => {
                Err(Error::UnsupportedModel { operation: "real-axis dielectric function", model: self.name() })
            }
        }
    }

    /// Largest characteristic frequency of the model (0 for Vacuum/PC).
    pub fn max_frequency(&self) -> f64 {
        match self {
            MaterialModel::Vacuum | MaterialModel::PerfectConductor => 0.0,
            MaterialModel::Plasma { omega_p } => *omega_p,
            MaterialModel::Drude { omega_p, nu } => omega_p.max(*nu),
            MaterialModel::SixOscillator { omega_p, oscillators } => oscillators
                .iter()
                .fold(*omega_p, |m, o| m.max(o.strength.sqrt()).max(o.omega).max(o.damping)),
            MaterialModel::TwoPlateau { omega_p1, omega_p2, omega_1, omega_2 } => {
                omega_p1.max(*omega_p2).max(*omega_1).max(*omega_2)
            }
            MaterialModel::SuperconductorMB(s) => s.gap.max(s.omega_sp),
        }
    }
}

/// Free function form of [`MaterialModel::epsilon_imag_axis`].
pub fn epsilon_imag_axis(model: &MaterialModel, omega: f64, spec: &QuadratureSpec) -> Result<f64> {
    model.epsilon_imag_axis(omega, spec)
}

/// ε(iω) of a Mattis–Bardeen superconductor.
pub fn epsilon_superconductor(omega: f64, sc: &Superconductor, spec: &QuadratureSpec) -> Result<f64> {
    MaterialModel::SuperconductorMB(*sc).epsilon_imag_axis(omega, spec)
}

/// Clean Mattis–Bardeen σ/σ_n at angular frequency ω for gap Δ (J).
pub fn sigma_mb_clean(omega: f64, delta: f64, consts: &PhysicalConstants, spec: &QuadratureSpec) -> Result<ComplexConductivity> {
    check_gap_inputs(omega, delta)?;
    let c = sigma_clean_reduced(consts.hbar * omega / delta, spec)?;
    Ok(ComplexConductivity { omega, ..c })
}

/// Mattis–Bardeen σ/σ_n with non-magnetic impurities, relaxation time τ (s).
pub fn sigma_mb_impure(
    omega: f64,
    delta: f64,
    tau: f64,
    consts: &PhysicalConstants,
    spec: &QuadratureSpec,
) -> Result<ComplexConductivity> {
    check_gap_inputs(omega, delta)?;
    if !(tau > 0.0) {
        return Err(Error::domain(format!("relaxation time must be positive, got {tau}")));
    }
    let c = sigma_impure_reduced(consts.hbar * omega / delta, consts.hbar / (tau * delta), spec)?;
    Ok(ComplexConductivity { omega, ..c })
}

fn check_gap_inputs(omega: f64, delta: f64) -> Result<()> {
    if !(omega > 0.0) || !(delta > 0.0) {
        return Err(Error::domain("frequency and gap must be positive"));
    }
    Ok(())
}
