//! Frequency shifts, spin-flip rates and the Weisskopf–Wigner amplitude.
//!
//! Ground-state shifts come from the imaginary-axis kernels alone:
//!
//! ```text
//! δω_g = (μ₀/4πħ) Σ_t μ_t² [(w_x + w_y) i_∥ + w_z i_⊥]
//! i_ρ  = −(ω_t/π) ∫₀^∞ dω' I_ρ(ω') / (ω_t² + ω'²)
//! ```
//!
//! The overall minus sign comes from `ω_βα < 0` for a ground state; with it a
//! perfect conductor gives `(2z)³ i_ρ = ĩ_ρ(k_t z) > 0`, a repulsive magnetic
//! shift. Electric-dipole transitions use `|d|²/(4πε₀ħ)` and the kernels with
//! `C_N ↔ C_M`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::materials::MaterialModel;
use crate::quadrature::{modular_split, modular_split_try, QuadratureSpec};
use crate::slabgreen::{curl_green_real_for, kernel_component, Component, Coupling, RealAxisResponse, Reflector, SlabGeometry};
use crate::units::{check_distance, PhysicalConstants};

/// One transition `|α⟩ ↔ |β⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    /// |ω_αβ|, rad/s.
    pub omega_t: f64,
    /// `(|S_x|², |S_y|², |S_z|²)` or `(|d̂_x|², |d̂_y|², |d̂_z|²)`.
    pub weights: [f64; 3],
    /// μ_B g_S (J/T) for magnetic, |d| (C·m) for electric transitions.
    pub moment_scale: f64,
    pub kind: Coupling,
}

impl Transition {
    pub fn new(omega_t: f64, weights: [f64; 3], moment_scale: f64, kind: Coupling) -> Result<Self> {
        if !(omega_t > 0.0) || !omega_t.is_finite() {
            return Err(Error::domain(format!(
                "transition frequency must be positive (non-degenerate levels), got {omega_t}"
            )));
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::domain("moment weights must be finite and non-negative"));
        }
        if !(moment_scale > 0.0) || !moment_scale.is_finite() {
            return Err(Error::domain("moment scale must be positive"));
        }
        Ok(Self { omega_t, weights, moment_scale, kind })
    }

    /// Spin transition with moment scale μ_B g_S.
    pub fn magnetic(omega_t: f64, weights: [f64; 3], consts: &PhysicalConstants) -> Result<Self> {
        Self::new(omega_t, weights, consts.spin_moment(), Coupling::Magnetic)
    }

    pub fn electric(omega_t: f64, weights: [f64; 3], dipole: f64) -> Result<Self> {
        Self::new(omega_t, weights, dipole, Coupling::Electric)
    }

    /// `w_x + w_y`, the weight of the parallel component.
    pub fn parallel_weight(&self) -> f64 {
        self.weights[0] + self.weights[1]
    }

    pub fn perp_weight(&self) -> f64 {
        self.weights[2]
    }

    /// μ₀μ²/(4πħ) or |d|²/(4πε₀ħ), in rad/s · m³.
    fn shift_prefactor(&self, consts: &PhysicalConstants) -> f64 {
        let m2 = self.moment_scale * self.moment_scale;
        match self.kind {
            Coupling::Magnetic => consts.mu0 * m2 / (4.0 * PI * consts.hbar),
            Coupling::Electric => m2 / (4.0 * PI * consts.eps0 * consts.hbar),
        }
    }

    fn with_weights(&self, weights: [f64; 3]) -> Self {
        Self { weights, ..*self }
    }
}

/// Non-empty list of transitions.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionSet {
    transitions: Vec<Transition>,
}

impl TransitionSet {
    pub fn new(transitions: Vec<Transition>) -> Result<Self> {
        if transitions.is_empty() {
            return Err(Error::domain("transition set is empty"));
        }
        Ok(Self { transitions })
    }

    pub fn single(t: Transition) -> Self {
        Self { transitions: vec![t] }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Transition> {
        self.transitions.iter()
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    /// Same transitions with every weight vector replaced.
    pub fn with_weights(&self, weights: [f64; 3]) -> Self {
        Self { transitions: self.transitions.iter().map(|t| t.with_weights(weights)).collect() }
    }
}

/// Rough distance regime of a transition at `k_t z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceRegime {
    /// `k_t z ≤ 0.01`.
    Near,
    /// `k_t z ≥ 10`.
    Far,
    Intermediate,
}

impl DistanceRegime {
    pub fn of(kz: f64) -> Self {
        if kz <= 0.01 {
            DistanceRegime::Near
        } else if kz >= 10.0 {
            DistanceRegime::Far
        } else {
            DistanceRegime::Intermediate
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftResult {
    /// Total shift, rad/s.
    pub delta_omega: f64,
    pub per_transition: Vec<f64>,
    pub regime_tags: Vec<DistanceRegime>,
}

impl ShiftResult {
    fn from_parts(parts: Vec<(f64, DistanceRegime)>) -> Self {
        let (per_transition, regime_tags): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
        Self { delta_omega: per_transition.iter().sum(), per_transition, regime_tags }
    }
}

/// Dimensionless perfect-conductor integrals `(ĩ_∥(x), ĩ_⊥(x))`:
///
/// ```text
/// ĩ_∥(x) = (2x/π) ∫₀^∞ dξ e^{−ξ}(ξ² + ξ + 1)/((2x)² + ξ²)
/// ĩ_⊥(x) = (4x/π) ∫₀^∞ dξ e^{−ξ}(ξ + 1)/((2x)² + ξ²)
/// ```
pub fn tilde_i(x: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("k z must be positive, got {x}")));
    }
    let par = modular_split(|xi| (-xi).exp() * (xi * xi + xi + 1.0), 2.0 * x, quad);
    let perp = modular_split(|xi| 2.0 * (-xi).exp() * (xi + 1.0), 2.0 * x, quad);
    Ok((par.require("parallel PC integral", quad)?, perp.require("perpendicular PC integral", quad)?))
}

fn check_frequency(omega: f64) -> Result<()> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain(format!("transition frequency must be positive, got {omega}")));
    }
    Ok(())
}

/// One component of `(2z)³ i_ρ` in reduced form: `x = ω_t z/c`, model in units of ω_t.
pub(crate) fn reduced_i_component(
    x: f64,
    reduced_model: &MaterialModel,
    thickness_ratio: Option<f64>,
    coupling: Coupling,
    component: Component,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if matches!(reduced_model, MaterialModel::Vacuum) {
        return Ok(0.0);
    }
    let inner = quad.nested();
    modular_split_try(
        |u| {
            let refl = Reflector::for_model(reduced_model, u, x, thickness_ratio, &inner)?;
            Ok(-kernel_component(x * u, &refl, coupling, component, &inner)?)
        },
        1.0,
        quad,
        "frequency integral of the shift kernel",
    )
}

/// Frequency-integrated kernels `(i_∥, i_⊥)` in m⁻³ for a magnetic transition.
pub fn i_rho(omega_t: f64, model: &MaterialModel, geom: &SlabGeometry, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    i_rho_for(omega_t, model, geom, Coupling::Magnetic, quad)
}

/// [`i_rho`] for either coupling.
pub fn i_rho_for(
    omega_t: f64,
    model: &MaterialModel,
    geom: &SlabGeometry,
    coupling: Coupling,
    quad: &QuadratureSpec,
) -> Result<(f64, f64)> {
    check_frequency(omega_t)?;
    let consts = PhysicalConstants::default();
    let x = omega_t * geom.z / consts.c;
    let scale = (2.0 * geom.z).powi(3);
    if matches!(model, MaterialModel::PerfectConductor) {
        let (p, n) = tilde_i(x, quad)?;
        let sign = match coupling {
            Coupling::Magnetic => 1.0,
            Coupling::Electric => -1.0,
        };
        return Ok((sign * p / scale, sign * n / scale));
    }
    let reduced = model.in_units_of(omega_t);
    let ratio = geom.thickness_ratio();
    let p = reduced_i_component(x, &reduced, ratio, coupling, Component::Parallel, quad)?;
    let n = reduced_i_component(x, &reduced, ratio, coupling, Component::Perp, quad)?;
    Ok((p / scale, n / scale))
}

/// Off-resonant (ground-state) frequency shift, rad/s.
pub fn ground_shift(
    geom: &SlabGeometry,
    transitions: &TransitionSet,
    model: &MaterialModel,
    consts: &PhysicalConstants,
    quad: &QuadratureSpec,
) -> Result<ShiftResult> {
    model.validate()?;
    let mut parts = Vec::with_capacity(transitions.len());
    for t in transitions.iter() {
        let kz = t.omega_t * geom.z / consts.c;
        let value = if matches!(model, MaterialModel::Vacuum) {
            0.0
        } else {
            let (ip, iz) = i_rho_for(t.omega_t, model, geom, t.kind, quad)?;
            t.shift_prefactor(consts) * (t.parallel_weight() * ip + t.perp_weight() * iz)
        };
        parts.push((value, DistanceRegime::of(kz)));
    }
    Ok(ShiftResult::from_parts(parts))
}

/// Resonant perfect-conductor functions `(f_∥, f_⊥)` at `X = 2kz`:
/// `f_∥ = −X² cos X + X sin X + cos X`, `f_⊥ = 2X sin X + 2 cos X`.
///
/// They equal `−4π(2z)³ Re[∇×G^S×∇]` for the mirror, so `f_⊥ = 2f_∥ + 2X² cos X`.
pub fn resonant_pc(kz: f64) -> (f64, f64) {
    let x = 2.0 * kz;
    let (s, c) = x.sin_cos();
    (-x * x * c + x * s + c, 2.0 * x * s + 2.0 * c)
}

/// Shift of the upper level of each transition above a perfect conductor, rad/s:
/// `(pref/(2z)³)[(w_x + w_y)(f_∥ − ĩ_∥) + w_z(f_⊥ − ĩ_⊥)]`.
pub fn excited_shift_pc(
    z: f64,
    transitions: &TransitionSet,
    consts: &PhysicalConstants,
    quad: &QuadratureSpec,
) -> Result<ShiftResult> {
    check_distance(z)?;
    let scale = (2.0 * z).powi(3);
    let mut parts = Vec::with_capacity(transitions.len());
    for t in transitions.iter() {
        let kz = t.omega_t * z / consts.c;
        let (ip, iz) = tilde_i(kz, quad)?;
        let (fp, fz) = resonant_pc(kz);
        let sign = match t.kind {
            Coupling::Magnetic => 1.0,
            Coupling::Electric => -1.0,
        };
        let value = sign * t.shift_prefactor(consts) / scale * (t.parallel_weight() * (fp - ip) + t.perp_weight() * (fz - iz));
        parts.push((value, DistanceRegime::of(kz)));
    }
    Ok(ShiftResult::from_parts(parts))
}

/// Leading long-distance form of [`excited_shift_pc`] for one transition:
/// `(pref/(2z)³)[−(w_x + w_y)X² cos X + 2w_z X sin X]`, `X = 2k_t z`.
pub fn excited_shift_pc_far(z: f64, t: &Transition, consts: &PhysicalConstants) -> f64 {
    let x = 2.0 * t.omega_t * z / consts.c;
    let sign = match t.kind {
        Coupling::Magnetic => 1.0,
        Coupling::Electric => -1.0,
    };
    let (s, c) = x.sin_cos();
    sign * t.shift_prefactor(consts) / (2.0 * z).powi(3) * (-t.parallel_weight() * x * x * c + 2.0 * t.perp_weight() * x * s)
}

/// Free-space emission rate `Γ₀ = μ₀μ²ω³/(3πħc³)` (magnetic) or
/// `|d|²ω³/(3πε₀ħc³)` (electric), scaled by the total weight `w_x + w_y + w_z`.
pub fn free_rate(t: &Transition, consts: &PhysicalConstants) -> f64 {
    let k = t.omega_t / consts.c;
    4.0 * t.shift_prefactor(consts) * k.powi(3) / 3.0 * t.weights.iter().sum::<f64>()
}

/// Spontaneous emission (spin-flip) rate near the slab, rad/s.
///
/// `Γ = (2μ₀/ħ) Σ μ² [(w_x + w_y)(k³/6π + Im G_xx) + w_z(k³/6π + Im G_zz)]`,
/// the free-space part added analytically.
pub fn spin_flip_rate(
    geom: &SlabGeometry,
    transitions: &TransitionSet,
    model: &MaterialModel,
    consts: &PhysicalConstants,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let mut total = 0.0;
    for t in transitions.iter() {
        let k = t.omega_t / consts.c;
        let free_im = k.powi(3) / (6.0 * PI);
        let (gp, gz) = match model {
            MaterialModel::Vacuum => (0.0, 0.0),
            MaterialModel::PerfectConductor => {
                let g = curl_green_real_for(t.omega_t, geom, RealAxisResponse::PerfectConductor, t.kind, quad)?;
                (g.parallel.im, g.perp.im)
            }
            _ => {
                let eps = model.epsilon_real_axis(t.omega_t)?;
                let g = curl_green_real_for(t.omega_t, geom, RealAxisResponse::Dielectric(eps), t.kind, quad)?;
                (g.parallel.im, g.perp.im)
            }
        };
        let rate = 8.0
            * PI
            * t.shift_prefactor(consts)
            * (t.parallel_weight() * (free_im + gp) + t.perp_weight() * (free_im + gz));
        total += rate;
    }
    Ok(total)
}

/// Weisskopf–Wigner amplitude `c(t) = c(0) exp(−(Γ/2 + iδω) t)`.
pub fn ww_amplitude(t: f64, gamma: f64, delta_omega: f64, c0: Complex64) -> Result<Complex64> {
    if !(t >= 0.0) || !(gamma >= 0.0) {
        return Err(Error::domain("need t ≥ 0 and Γ ≥ 0"));
    }
    Ok(c0 * Complex64::new(-0.5 * gamma * t, -delta_omega * t).exp())
}
