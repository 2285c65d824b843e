//! Ground-state Casimir-Polder forces.
//!
//! The force `F = −ħ dδω_g/dz` is taken under the integral sign: at fixed
//! slab thickness only `e^{−2η₀z}` depends on `z`, so the derivative brings
//! down `−2η₀ = −2(ξ+w)/z`. Removing the prefactor `μ₀μ²/(32πz⁴)` leaves
//!
//! ```text
//! ī_ρ(x) = (1/π) ∫₀^∞ du Ī_ρ(xu) / (1 + u²)
//! Ī_⊥(ξ) = 16 e^{−2ξ} ∫₀^∞ dw (ξ+w) w(w+2ξ) e^{−2w} (−C_M)
//! Ī_∥(ξ) =  8 e^{−2ξ} ∫₀^∞ dw (ξ+w) e^{−2w} [(ξ+w)²(−C_M) + ξ² C_N]
//! ```
//!
//! with `x = k_A z` and the material expressed in units of ω_A. Electric
//! dipoles use the same expressions with `C_N ↔ C_M` and the prefactor
//! `|d|²/(32πε₀z⁴)`.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::materials::MaterialModel;
use crate::quadrature::{integrate_adaptive, modular_split_try, QuadratureSpec, SingularEndpoints, TailPolicy, Upper};
use crate::shifts::TransitionSet;
use crate::slabgreen::{Component, Reflector, SlabGeometry};
use crate::units::{check_distance, PhysicalConstants};

pub use crate::slabgreen::Coupling;

/// Asymptotic regime of the magnetic force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `x ≲ 0.1`, `αx ≲ 0.1`: `F_M ∝ (αx)²`.
    QuadraticRise,
    /// `x ≲ 0.1`, `αx ≳ 10`: `F_M` flat at the perfect-conductor value.
    Plateau,
    /// `x ≳ 10`, `αx ≳ 10`: `F_M ∝ 1/x`.
    FarField,
    Unclassified,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::QuadraticRise => "quadratic-rise",
            Regime::Plateau => "plateau",
            Regime::FarField => "far-field",
            Regime::Unclassified => "unclassified",
        }
    }
}

/// One evaluated point of a force curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcePoint {
    /// k_A z.
    pub x: f64,
    pub ibar_parallel: f64,
    pub ibar_perp: f64,
    /// `F_M` or `F_E`.
    pub value: f64,
    /// Newtons, when a distance and moment were supplied.
    pub dimensional: Option<f64>,
    pub regime: Regime,
    /// Asymptotic value of `value` inside a classified regime.
    pub prediction: Option<f64>,
    pub coupling: Coupling,
}

impl ForcePoint {
    /// Attaches the dimensional force `prefactor · value`.
    pub fn with_prefactor(self, prefactor: f64) -> Self {
        Self { dimensional: Some(prefactor * self.value), ..self }
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("k_A z must be positive and finite, got {x}")));
    }
    Ok(())
}

fn coupling_sign(coupling: Coupling) -> f64 {
    match coupling {
        Coupling::Magnetic => 1.0,
        Coupling::Electric => -1.0,
    }
}

/// Perfect-conductor `(Ī_∥, Ī_⊥)` at `ξ` for a magnetic moment.
pub fn ibar_integrands_pc(xi: f64) -> (f64, f64) {
    let d = (-2.0 * xi).exp();
    let par = (3.0 + xi * (6.0 + xi * (8.0 + 8.0 * xi))) * d;
    let perp = 2.0 * (3.0 + xi * (6.0 + 4.0 * xi)) * d;
    (par, perp)
}

/// `Ī_∥` or `Ī_⊥` at `ξ` for a given reflector.
pub(crate) fn ibar_integrand(
    xi: f64,
    reflector: &Reflector,
    coupling: Coupling,
    component: Component,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let damping = (-2.0 * xi).exp();
    if matches!(reflector, Reflector::Transparent) || damping == 0.0 {
        return Ok(0.0);
    }
    let tail = spec.with_tail(TailPolicy::ExponentialBound { decay_length: 0.5 });
    let coeffs = |s: f64| coupling.arrange(reflector.coefficients(s));
    match component {
        Component::Perp => {
            let r = integrate_adaptive(
                |w| {
                    let s = xi + w;
                    -s * w * (w + 2.0 * xi) * (-2.0 * w).exp() * coeffs(s).1
                },
                0.0,
                Upper::Infinite,
                &tail,
                SingularEndpoints::NONE,
            );
            Ok(16.0 * damping * r.require("perpendicular force kernel", &tail)?)
        }
        Component::Parallel => {
            let r = integrate_adaptive(
                |w| {
                    let s = xi + w;
                    let (c_n, c_m) = coeffs(s);
                    s * (-2.0 * w).exp() * (-s * s * c_m + xi * xi * c_n)
                },
                0.0,
                Upper::Infinite,
                &tail,
                SingularEndpoints::NONE,
            );
            Ok(8.0 * damping * r.require("parallel force kernel", &tail)?)
        }
    }
}

fn frequency_integral<F>(integrand: F, what: &str, quad: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    modular_split_try(integrand, 1.0, quad, what)
}

/// Rescaled force kernels `(ī_∥, ī_⊥)` at `x = k_A z`.
///
/// `reduced_model` is the material in units of ω_A, `thickness_ratio` is `h/z`.
pub fn force_kernels(
    x: f64,
    reduced_model: &MaterialModel,
    thickness_ratio: Option<f64>,
    quad: &QuadratureSpec,
    coupling: Coupling,
) -> Result<(f64, f64)> {
    check_x(x)?;
    quad.validate()?;
    let sign = coupling_sign(coupling);
    match reduced_model {
        MaterialModel::Vacuum => Ok((0.0, 0.0)),
        MaterialModel::PerfectConductor => {
            let par = frequency_integral(|u| Ok(ibar_integrands_pc(x * u).0), "parallel force integral", quad)?;
            let perp = frequency_integral(|u| Ok(ibar_integrands_pc(x * u).1), "perpendicular force integral", quad)?;
            Ok((sign * par, sign * perp))
        }
        _ => {
            reduced_model.validate()?;
            let inner = quad.nested();
            let component = |c: Component, what: &str| {
                frequency_integral(
                    |u| {
                        let refl = Reflector::for_model(reduced_model, u, x, thickness_ratio, &inner)?;
                        ibar_integrand(x * u, &refl, coupling, c, &inner)
                    },
                    what,
                    quad,
                )
            };
            Ok((
                component(Component::Parallel, "parallel force integral")?,
                component(Component::Perp, "perpendicular force integral")?,
            ))
        }
    }
}

/// `(Ī_∥, Ī_⊥)` of a half-space with `ε = 1 + γ²/ξ²`, written in the
/// transverse variable `t = λz` with `s = √(t² + ξ²)`.
pub fn ibar_integrands_plasma(xi: f64, gamma2: f64, coupling: Coupling, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let damping = (-2.0 * xi).exp();
    if gamma2 == 0.0 || damping == 0.0 {
        return Ok((0.0, 0.0));
    }
    let xi2 = xi * xi;
    // (−C_M, C_N) for a magnetic moment, (−C_N, C_M) for an electric dipole
    let ratios = |t: f64| {
        let s = (t * t + xi2).sqrt();
        let root = (gamma2 + s * s).sqrt();
        let a = gamma2 / ((root + s) * (root + s));
        let b = gamma2 * (s * (root + s) - xi2) / ((root + s) * ((xi2 + gamma2) * s + xi2 * root));
        let pair = match coupling {
            Coupling::Magnetic => (a, b),
            Coupling::Electric => (-b, -a),
        };
        (s, pair)
    };
    // e^{−2(s−ξ)}, with s − ξ = t²/(s + ξ)
    let decay = |t: f64, s: f64| (-2.0 * t * t / (s + xi)).exp();
    let tail = quad.with_tail(TailPolicy::ExponentialBound { decay_length: 0.5 * (1.0 + xi.sqrt()) });
    let perp = integrate_adaptive(
        |t| {
            let (s, (a, _)) = ratios(t);
            t.powi(3) * decay(t, s) * a
        },
        0.0,
        Upper::Infinite,
        &tail,
        SingularEndpoints::NONE,
    );
    let par = integrate_adaptive(
        |t| {
            let (s, (a, b)) = ratios(t);
            t * decay(t, s) * (s * s * a + xi2 * b)
        },
        0.0,
        Upper::Infinite,
        &tail,
        SingularEndpoints::NONE,
    );
    Ok((
        8.0 * damping * par.require("parallel plasma force kernel", &tail)?,
        16.0 * damping * perp.require("perpendicular plasma force kernel", &tail)?,
    ))
}

/// Rescaled kernels of the plasma (`ν̄ = 0`) or Drude half-space from the
/// closed plasma-form integrands, with `γ² = (αx)² u/(u + ν̄)` at `u = ω'/ω_A`.
pub fn force_kernels_plasma(x: f64, alpha: f64, nu_bar: f64, coupling: Coupling, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    check_x(x)?;
    if !(alpha >= 0.0) || !(nu_bar >= 0.0) {
        return Err(Error::domain("alpha and nu_bar must be non-negative"));
    }
    let inner = quad.nested();
    let gamma2 = |u: f64| {
        let g = alpha * x;
        if nu_bar == 0.0 {
            g * g
        } else {
            g * g * u / (u + nu_bar)
        }
    };
    let par = frequency_integral(
        |u| Ok(ibar_integrands_plasma(x * u, gamma2(u), coupling, &inner)?.0),
        "parallel plasma force integral",
        quad,
    )?;
    let perp = frequency_integral(
        |u| Ok(ibar_integrands_plasma(x * u, gamma2(u), coupling, &inner)?.1),
        "perpendicular plasma force integral",
        quad,
    )?;
    Ok((par, perp))
}

fn combine(weights: [f64; 3], (par, perp): (f64, f64)) -> f64 {
    (weights[0] + weights[1]) * par + weights[2] * perp
}

fn check_weights(weights: [f64; 3]) -> Result<()> {
    if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
        return Err(Error::domain("moment weights must be finite and non-negative"));
    }
    Ok(())
}

/// Dimensionless magnetic force `F_M = (w_x + w_y) ī_∥ + w_z ī_⊥`.
pub fn f_m(
    x: f64,
    weights: [f64; 3],
    reduced_model: &MaterialModel,
    thickness_ratio: Option<f64>,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_weights(weights)?;
    Ok(combine(weights, force_kernels(x, reduced_model, thickness_ratio, quad, Coupling::Magnetic)?))
}

/// Dimensionless electric force `F_E`, negative (attractive).
pub fn f_e(
    x: f64,
    weights: [f64; 3],
    reduced_model: &MaterialModel,
    thickness_ratio: Option<f64>,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_weights(weights)?;
    Ok(combine(weights, force_kernels(x, reduced_model, thickness_ratio, quad, Coupling::Electric)?))
}

/// Force on the atom in newtons, positive away from the slab.
///
/// Each transition contributes `prefactor · [(w_x + w_y) ī_∥ + w_z ī_⊥]` at its
/// own `k_t z`, with `μ₀μ²/(32πz⁴)` or `|d|²/(32πε₀z⁴)`.
pub fn f_dimensional(
    geom: &SlabGeometry,
    transitions: &TransitionSet,
    model: &MaterialModel,
    consts: &PhysicalConstants,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_distance(geom.z)?;
    model.validate()?;
    if matches!(model, MaterialModel::Vacuum) {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for t in transitions.iter() {
        let x = t.omega_t * geom.z / consts.c;
        let kernels = force_kernels(x, &model.in_units_of(t.omega_t), geom.thickness_ratio(), quad, t.kind)?;
        total += moment_prefactor(geom.z, t.moment_scale, t.kind, consts) * combine(t.weights, kernels);
    }
    Ok(total)
}

/// `μ₀m²/(32πz⁴)` or `m²/(32πε₀z⁴)`.
pub fn moment_prefactor(z: f64, moment: f64, coupling: Coupling, consts: &PhysicalConstants) -> f64 {
    let m2 = moment * moment;
    let z4 = 32.0 * PI * z.powi(4);
    match coupling {
        Coupling::Magnetic => consts.mu0 * m2 / z4,
        Coupling::Electric => m2 / (consts.eps0 * z4),
    }
}

/// Classifies `(x, α, ν̄)` and predicts the magnetic `(ī_∥, ī_⊥)` there.
///
/// Damping is folded in through `α_eff = α/√(1 + ν̄)`; the quadratic-rise
/// prediction is only given for `ν̄ = 0`.
pub fn regime_classify(x: f64, alpha: f64, nu_bar: f64) -> (Regime, Option<(f64, f64)>) {
    let regime = classify(x, alpha, nu_bar);
    (regime, predicted_kernels(regime, x, alpha, nu_bar, Coupling::Magnetic))
}

fn classify(x: f64, alpha: f64, nu_bar: f64) -> Regime {
    let ax = alpha / (1.0 + nu_bar).sqrt() * x;
    if x >= 10.0 && ax >= 10.0 {
        Regime::FarField
    } else if x <= 0.1 && ax <= 0.1 {
        Regime::QuadraticRise
    } else if x <= 0.1 && ax >= 10.0 {
        Regime::Plateau
    } else {
        Regime::Unclassified
    }
}

/// Asymptotic `(ī_∥, ī_⊥)` in `regime` for either coupling.
pub fn predicted_kernels(regime: Regime, x: f64, alpha: f64, nu_bar: f64, coupling: Coupling) -> Option<(f64, f64)> {
    let sign = coupling_sign(coupling);
    match regime {
        Regime::Plateau => Some((sign * 1.5, sign * 3.0)),
        Regime::FarField => {
            let v = sign * 8.0 / (PI * x);
            Some((v, v))
        }
        Regime::QuadraticRise if nu_bar == 0.0 => match coupling {
            Coupling::Magnetic => {
                let g2 = (alpha * x).powi(2) / 2.0;
                Some((g2 * (0.5 + 2.0 / (2.0 + SQRT_2 * alpha)), g2))
            }
            Coupling::Electric => {
                let r = alpha / (SQRT_2 + alpha);
                Some((-1.5 * r, -3.0 * r))
            }
        },
        _ => None,
    }
}

/// `α = ω_p/ω_A` and `ν̄ = ν/ω_A` of a model already in units of ω_A, if it has them.
pub fn reduced_plasma_parameters(reduced_model: &MaterialModel) -> Option<(f64, f64)> {
    match reduced_model {
        MaterialModel::PerfectConductor => Some((f64::INFINITY, 0.0)),
        MaterialModel::Plasma { omega_p } => Some((*omega_p, 0.0)),
        MaterialModel::Drude { omega_p, nu } => Some((*omega_p, *nu)),
        _ => None,
    }
}

/// Evaluates the force at `x` and tags it with its regime and prediction.
pub fn force_point(
    x: f64,
    weights: [f64; 3],
    reduced_model: &MaterialModel,
    thickness_ratio: Option<f64>,
    coupling: Coupling,
    quad: &QuadratureSpec,
) -> Result<ForcePoint> {
    check_weights(weights)?;
    let (ibar_parallel, ibar_perp) = force_kernels(x, reduced_model, thickness_ratio, quad, coupling)?;
    let (regime, prediction) = match (reduced_plasma_parameters(reduced_model), thickness_ratio) {
        (Some((alpha, nu_bar)), None) => {
            let regime = classify(x, alpha, nu_bar);
            (regime, predicted_kernels(regime, x, alpha, nu_bar, coupling).map(|k| combine(weights, k)))
        }
        _ => (Regime::Unclassified, None),
    };
    Ok(ForcePoint {
        x,
        ibar_parallel,
        ibar_perp,
        value: combine(weights, (ibar_parallel, ibar_perp)),
        dimensional: None,
        regime,
        prediction,
        coupling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shifts::{ground_shift, Transition};
    use approx::assert_relative_eq;

    const EQUAL: [f64; 3] = [0.25, 0.25, 0.25];

    fn plasma(alpha: f64) -> MaterialModel {
        MaterialModel::Plasma { omega_p: alpha }
    }

    #[test]
    fn vacuum_gives_zero() {
        let q = QuadratureSpec::default();
        assert_eq!(force_kernels(0.3, &MaterialModel::Vacuum, None, &q, Coupling::Magnetic).unwrap(), (0.0, 0.0));
        assert_eq!(force_kernels(0.3, &MaterialModel::Vacuum, None, &q, Coupling::Electric).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn rejects_bad_x() {
        let q = QuadratureSpec::default();
        assert!(force_kernels(0.0, &plasma(1.0), None, &q, Coupling::Magnetic).is_err());
        assert!(force_kernels(f64::NAN, &plasma(1.0), None, &q, Coupling::Magnetic).is_err());
    }

    #[test]
    fn perfect_reflector_integrand_matches_closed_form() {
        let q = QuadratureSpec::default();
        for xi in [0.0, 1e-3, 0.2, 1.0, 4.5, 30.0] {
            let (p, n) = ibar_integrands_pc(xi);
            let gp = ibar_integrand(xi, &Reflector::Perfect, Coupling::Magnetic, Component::Parallel, &q).unwrap();
            let gn = ibar_integrand(xi, &Reflector::Perfect, Coupling::Magnetic, Component::Perp, &q).unwrap();
            assert_relative_eq!(gp, p, max_relative = 1e-10);
            assert_relative_eq!(gn, n, max_relative = 1e-10);
        }
    }

    #[test]
    fn perp_integrand_against_trapezoid() {
        // plain trapezoid over w for a plasma reflector at ξ = 0.4, γ = 1.3
        let xi = 0.4;
        let refl = Reflector::dielectric(xi, 1.69, None);
        let q = QuadratureSpec::default();
        let v = ibar_integrand(xi, &refl, Coupling::Magnetic, Component::Perp, &q).unwrap();
        let n = 400_000;
        let h = 40.0 / n as f64;
        let f = |w: f64| -(xi + w) * w * (w + 2.0 * xi) * (-2.0 * w).exp() * refl.coefficients(xi + w).1;
        let mut sum = 0.5 * (f(0.0) + f(40.0));
        for i in 1..n {
            sum += f(i as f64 * h);
        }
        assert_relative_eq!(v, 16.0 * (-2.0 * xi).exp() * sum * h, max_relative = 1e-8);
    }

    #[test]
    fn plasma_form_matches_general_path() {
        let q = QuadratureSpec::default();
        for &(x, alpha, nu) in &[(0.01, 1.0, 0.0), (0.3, 10.0, 0.0), (2.0, 3.0, 0.0), (0.1, 5.0, 2.0)] {
            let model = if nu == 0.0 { plasma(alpha) } else { MaterialModel::Drude { omega_p: alpha, nu } };
            for coupling in [Coupling::Magnetic, Coupling::Electric] {
                let general = force_kernels(x, &model, None, &q, coupling).unwrap();
                let transverse = force_kernels_plasma(x, alpha, nu, coupling, &q).unwrap();
                assert_relative_eq!(general.0, transverse.0, max_relative = 10.0 * q.rel_tol);
                assert_relative_eq!(general.1, transverse.1, max_relative = 10.0 * q.rel_tol);
            }
        }
    }

    #[test]
    fn plateau_value() {
        let q = QuadratureSpec::default();
        let f = f_m(0.01, EQUAL, &plasma(1e4), None, &q).unwrap();
        assert!((f - 1.5).abs() < 0.05 * 1.5, "{f}");
    }

    #[test]
    fn quadratic_rise_value() {
        let q = QuadratureSpec::default();
        let (alpha, x) = (1.0, 0.01);
        let f = f_m(x, EQUAL, &plasma(alpha), None, &q).unwrap();
        let (_, pred) = regime_classify(x, alpha, 0.0);
        let expected = combine(EQUAL, pred.unwrap());
        assert_relative_eq!(expected, 3.964_466_094e-5, max_relative = 1e-8);
        assert_relative_eq!(f, expected, max_relative = 0.05);
    }

    #[test]
    fn far_field_value() {
        let q = QuadratureSpec::default();
        let x = 20.0;
        let f = f_m(x, EQUAL, &plasma(1e4), None, &q).unwrap();
        assert!((f * PI * x / 8.0 - 0.75).abs() < 0.05 * 0.75, "{f}");
        let fe = f_e(x, EQUAL, &plasma(1e4), None, &q).unwrap();
        assert!((fe * PI * x / 8.0 + 0.75).abs() < 0.05 * 0.75, "{fe}");
    }

    #[test]
    fn electric_near_field() {
        let q = QuadratureSpec::default();
        let f = f_e(1e-3, EQUAL, &plasma(1.0), None, &q).unwrap();
        let expected = -(0.5 * 1.5 + 0.25 * 3.0) / (SQRT_2 + 1.0);
        assert_relative_eq!(f, expected, max_relative = 0.03);
    }

    #[test]
    fn pc_duality() {
        let q = QuadratureSpec::default();
        for x in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let m = f_m(x, EQUAL, &MaterialModel::PerfectConductor, None, &q).unwrap();
            let e = f_e(x, EQUAL, &MaterialModel::PerfectConductor, None, &q).unwrap();
            assert!(m > 0.0 && e < 0.0);
            assert_relative_eq!(-e, m, max_relative = 1e-12);
        }
    }

    #[test]
    fn large_alpha_approaches_perfect_conductor() {
        let q = QuadratureSpec::default();
        for x in [1e-3, 0.1, 1.0, 10.0] {
            let pc = f_m(x, EQUAL, &MaterialModel::PerfectConductor, None, &q).unwrap();
            let metal = f_m(x, EQUAL, &plasma(1e8), None, &q).unwrap();
            assert_relative_eq!(metal, pc, max_relative = 1e-3);
        }
    }

    #[test]
    fn signs_across_grid() {
        let q = QuadratureSpec::default();
        let models = [plasma(1.0), plasma(100.0), MaterialModel::Drude { omega_p: 10.0, nu: 1.0 }];
        for m in &models {
            for x in [1e-3, 1e-1, 1.0, 1e2] {
                assert!(f_m(x, EQUAL, m, None, &q).unwrap() > 0.0);
                assert!(f_e(x, EQUAL, m, None, &q).unwrap() < 0.0);
            }
        }
    }

    #[test]
    fn thinner_slabs_push_less() {
        let q = QuadratureSpec::default();
        let m = plasma(1e4);
        let mut last = 0.0;
        for ratio in [Some(1e-6), Some(1e-4), Some(1e-2), Some(1e-1), Some(1.0), None] {
            let f = f_m(0.1, EQUAL, &m, ratio, &q).unwrap();
            assert!(f >= last, "{ratio:?}: {f} < {last}");
            last = f;
        }
    }

    #[test]
    fn regime_examples() {
        assert_eq!(regime_classify(1e-3, 1.0, 0.0).0, Regime::QuadraticRise);
        assert_eq!(regime_classify(1e-3, 1e4, 0.0).0, Regime::Plateau);
        assert_eq!(regime_classify(50.0, 1e3, 0.0).0, Regime::FarField);
        assert_eq!(regime_classify(1.0, 1.0, 0.0), (Regime::Unclassified, None));
        assert_eq!(regime_classify(1e-3, 1.0, 1.0).1, None);
    }

    #[test]
    fn dimensional_matches_rescaled() {
        let k = PhysicalConstants::default();
        let q = QuadratureSpec::default();
        let omega = 1e15;
        let t = TransitionSet::single(Transition::magnetic(omega, EQUAL, &k).unwrap());
        let model = MaterialModel::Plasma { omega_p: 3.0 * omega };
        for z in [1e-8, 3e-7, 2e-6] {
            let geom = SlabGeometry::half_space(z).unwrap();
            let f = f_dimensional(&geom, &t, &model, &k, &q).unwrap();
            let x = omega * z / k.c;
            let fm = f_m(x, EQUAL, &model.in_units_of(omega), None, &q).unwrap();
            let pref = crate::units::force_prefactor_magnetic(z, &k).unwrap();
            assert_relative_eq!(f / pref, fm, max_relative = 1e-10);
        }
    }

    #[test]
    fn dimensional_vacuum_is_zero() {
        let k = PhysicalConstants::default();
        let q = QuadratureSpec::default();
        let t = TransitionSet::single(Transition::magnetic(1e10, EQUAL, &k).unwrap());
        let geom = SlabGeometry::half_space(1e-6).unwrap();
        assert_eq!(f_dimensional(&geom, &t, &MaterialModel::Vacuum, &k, &q).unwrap(), 0.0);
    }

    #[test]
    fn force_is_minus_shift_derivative() {
        let k = PhysicalConstants::default();
        let q = QuadratureSpec::default();
        let omega = 2e15;
        let t = TransitionSet::single(Transition::magnetic(omega, [0.1, 0.2, 0.3], &k).unwrap());
        let cases = [
            (MaterialModel::PerfectConductor, None),
            (MaterialModel::Drude { omega_p: 5.0 * omega, nu: 0.3 * omega }, None),
            (MaterialModel::Plasma { omega_p: 2.0 * omega }, Some(5e-8)),
        ];
        for (model, h) in &cases {
            let z = 1e-7;
            let dz = z * 1e-4;
            let shift = |z: f64| {
                let g = SlabGeometry::new(z, *h).unwrap();
                k.hbar * ground_shift(&g, &t, model, &k, &q).unwrap().delta_omega
            };
            let fd = -(shift(z + dz) - shift(z - dz)) / (2.0 * dz);
            let f = f_dimensional(&SlabGeometry::new(z, *h).unwrap(), &t, model, &k, &q).unwrap();
            assert_relative_eq!(f, fd, max_relative = 1e-5);
        }
    }

    #[test]
    fn force_point_tags_prediction() {
        let q = QuadratureSpec::default();
        let p = force_point(0.01, EQUAL, &plasma(1e4), None, Coupling::Magnetic, &q).unwrap();
        assert_eq!(p.regime, Regime::Plateau);
        assert_relative_eq!(p.prediction.unwrap(), 1.5);
        let p = p.with_prefactor(2.0);
        assert_eq!(p.dimensional, Some(2.0 * p.value));
        let e = force_point(50.0, EQUAL, &plasma(1e4), None, Coupling::Electric, &q).unwrap();
        assert_eq!(e.regime, Regime::FarField);
        assert!(e.prediction.unwrap() < 0.0);
    }
}
