//! Reflection off a slab and the equal-position curl-curl scattering Green tensor.
//!
//! On the imaginary axis the λ-integrals are written with `s = η₀z = ξ + w`,
//! `ξ = ωz/c`, so that `e^{−2η₀z} = e^{−2ξ}e^{−2w}` and the material enters
//! only through `X = ξ²(ε(iω) − 1)`. The reduced kernels are
//!
//! ```text
//! K_⊥ = (2z)³ I_⊥ = 8 e^{−2ξ} ∫₀^∞ dw w(w+2ξ) e^{−2w} C_M
//! K_∥ = (2z)³ I_∥ = 4 e^{−2ξ} ∫₀^∞ dw e^{−2w} [(ξ+w)² C_M − ξ² C_N]
//! ```
//!
//! Only the scattered part of the field is ever computed, so vacuum gives
//! exactly zero.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::materials::MaterialModel;
use crate::quadrature::{integrate_adaptive, neumaier_sum, QuadratureSpec, SingularEndpoints, TailPolicy, Upper};
use crate::units::check_distance;

/// Speed of light (exact SI value), m/s.
const C_LIGHT: f64 = 299_792_458.0;

/// Atom at distance `z` above a slab of thickness `h` (`None`: half-space).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabGeometry {
    pub z: f64,
    pub h: Option<f64>,
}

impl SlabGeometry {
    pub fn new(z: f64, h: Option<f64>) -> Result<Self> {
        check_distance(z)?;
        if let Some(h) = h {
            if !(h > 0.0) {
                return Err(Error::domain(format!("slab thickness must be positive, got {h}")));
            }
        }
        Ok(Self { z, h: h.filter(|h| h.is_finite()) })
    }

    pub fn half_space(z: f64) -> Result<Self> {
        Self::new(z, None)
    }

    /// `h/z`, or `None` for an infinitely thick slab.
    pub fn thickness_ratio(&self) -> Option<f64> {
        self.h.map(|h| h / self.z)
    }

    /// Same thickness-to-distance ratio at another distance.
    pub fn at_distance(&self, z: f64) -> Result<Self> {
        Self::new(z, self.thickness_ratio().map(|r| r * z))
    }
}

/// Imaginary-axis reflection in reduced form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Reflector {
    Transparent,
    Perfect,
    Dielectric {
        xi: f64,
        /// `ξ²(ε − 1)`.
        x2chi: f64,
        /// `1/ε`.
        inv_eps: f64,
        /// `(ε − 1)/ε`.
        chi_over_eps: f64,
        /// `h` in units of the length that reduces `ξ` (normally `z`).
        thickness: Option<f64>,
    },
}

impl Reflector {
    /// Reflector at reduced frequency `xi` with `x2chi = ξ²(ε−1)`.
    pub(crate) fn dielectric(xi: f64, x2chi: f64, thickness: Option<f64>) -> Self {
        if x2chi == 0.0 {
            return Reflector::Transparent;
        }
        let denom = xi * xi + x2chi;
        Reflector::Dielectric { xi, x2chi, inv_eps: xi * xi / denom, chi_over_eps: x2chi / denom, thickness }
    }

    /// Reflector of `model` at frequency `omega` (model units); `time_scale`
    /// converts frequency to `ξ` (`z/c` in matching units).
    pub(crate) fn for_model(
        model: &MaterialModel,
        omega: f64,
        time_scale: f64,
        thickness: Option<f64>,
        spec: &QuadratureSpec,
    ) -> Result<Self> {
        Ok(match model {
            MaterialModel::Vacuum => Reflector::Transparent,
            MaterialModel::PerfectConductor => Reflector::Perfect,
            _ => {
                let s = model.scaled_susceptibility(omega, spec)?;
                Reflector::dielectric(omega * time_scale, time_scale * time_scale * s, thickness)
            }
        })
    }

    /// `(C_N, C_M)` at `s = η₀z`.
    pub(crate) fn coefficients(&self, s: f64) -> (f64, f64) {
        match *self {
            Reflector::Transparent => (0.0, 0.0),
            Reflector::Perfect => (1.0, -1.0),
            Reflector::Dielectric { xi, x2chi, inv_eps, chi_over_eps, thickness } => {
                let eta = (s * s + x2chi).sqrt();
                let ds = s + eta;
                let r_s = -x2chi / (ds * ds);
                let dp = s + eta * inv_eps;
                let r_p = chi_over_eps * ((1.0 + inv_eps) * s * s - xi * xi * inv_eps) / (dp * dp);
                match thickness {
                    None => (r_p, r_s),
                    Some(h) => {
                        let e = (-2.0 * eta * h).exp();
                        let one_minus_e = -(-2.0 * eta * h).exp_m1();
                        // 1 − r²E = (1 − E) + E(1 − r)(1 + r)
                        let c_n = r_p * one_minus_e / (one_minus_e + e * (2.0 * eta * inv_eps / dp) * (2.0 * s / dp));
                        let c_m = r_s * one_minus_e / (one_minus_e + e * (2.0 * eta / ds) * (2.0 * s / ds));
                        (c_n, c_m)
                    }
                }
            }
        }
    }
}

/// Fresnel coefficients `(r_s, r_p)` on the imaginary axis for wavenumber
/// `λ` (m⁻¹), frequency `ω` (rad/s) and `ε = ε(iω) ≥ 1`.
pub fn fresnel_imag(lambda: f64, omega: f64, eps: f64) -> Result<(f64, f64)> {
    check_fresnel_inputs(lambda, omega, eps)?;
    let (c_n, c_m) = reflector_si(lambda, omega, eps, None).1;
    Ok((c_m, c_n))
}

/// Slab scattering coefficients `(C_N, C_M)`; `h = None` is the half-space.
pub fn scatter_coeffs(lambda: f64, omega: f64, eps: f64, h: Option<f64>) -> Result<(f64, f64)> {
    check_fresnel_inputs(lambda, omega, eps)?;
    if let Some(h) = h {
        if !(h >= 0.0) {
            return Err(Error::domain(format!("slab thickness must be non-negative, got {h}")));
        }
    }
    Ok(reflector_si(lambda, omega, eps, h.filter(|h| h.is_finite())).1)
}

/// `(C_N, C_M)` of a perfect conductor, for any thickness.
pub fn scatter_coeffs_perfect() -> (f64, f64) {
    Reflector::Perfect.coefficients(1.0)
}

fn check_fresnel_inputs(lambda: f64, omega: f64, eps: f64) -> Result<()> {
    if !(lambda >= 0.0) || !lambda.is_finite() || !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain("need λ ≥ 0 and ω > 0"));
    }
    if !(eps >= 1.0) || !eps.is_finite() {
        return Err(Error::domain(format!("imaginary-axis ε must be finite and ≥ 1, got {eps}")));
    }
    Ok(())
}

fn reflector_si(lambda: f64, omega: f64, eps: f64, h: Option<f64>) -> (Reflector, (f64, f64)) {
    // lengths in units of 1/k
    let k = omega / C_LIGHT;
    let s = (1.0 + (lambda / k).powi(2)).sqrt();
    let r = Reflector::dielectric(1.0, eps - 1.0, h.map(|h| h * k));
    (r, r.coefficients(s))
}

/// Diagonal of the imaginary-axis curl-curl scattering tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPair {
    /// I_∥(ω), m⁻³.
    pub parallel: f64,
    /// I_⊥(ω), m⁻³.
    pub perp: f64,
    /// (2z)³ I_∥.
    pub reduced_parallel: f64,
    /// (2z)³ I_⊥.
    pub reduced_perp: f64,
}

/// Which dipole couples to the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coupling {
    Magnetic,
    /// Electric dipole: the scattering coefficients C_N and C_M trade places.
    Electric,
}

impl Coupling {
    pub fn name(&self) -> &'static str {
        match self {
            Coupling::Magnetic => "magnetic",
            Coupling::Electric => "electric",
        }
    }

    /// `(C_N, C_M)` as seen by this coupling.
    pub(crate) fn arrange<T>(&self, (c_n, c_m): (T, T)) -> (T, T) {
        match self {
            Coupling::Magnetic => (c_n, c_m),
            Coupling::Electric => (c_m, c_n),
        }
    }
}

/// Diagonal tensor component: `Parallel` is xx = yy, `Perp` is zz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Parallel,
    Perp,
}

/// One reduced kernel `K_∥` or `K_⊥` at `ξ`.
pub(crate) fn kernel_component(
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
                |w| w * (w + 2.0 * xi) * (-2.0 * w).exp() * coeffs(xi + w).1,
                0.0,
                Upper::Infinite,
                &tail,
                SingularEndpoints::NONE,
            );
            Ok(8.0 * damping * r.require("perpendicular kernel", &tail)?)
        }
        Component::Parallel => {
            let r = integrate_adaptive(
                |w| {
                    let s = xi + w;
                    let (c_n, c_m) = coeffs(s);
                    (-2.0 * w).exp() * (s * s * c_m - xi * xi * c_n)
                },
                0.0,
                Upper::Infinite,
                &tail,
                SingularEndpoints::NONE,
            );
            Ok(4.0 * damping * r.require("parallel kernel", &tail)?)
        }
    }
}

/// Reduced kernels `(K_∥, K_⊥)` at `ξ` for a given reflector.
pub(crate) fn kernels_reduced(xi: f64, reflector: &Reflector, coupling: Coupling, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    Ok((
        kernel_component(xi, reflector, coupling, Component::Parallel, spec)?,
        kernel_component(xi, reflector, coupling, Component::Perp, spec)?,
    ))
}

/// `I_∥(ω)`, `I_⊥(ω)` for the slab at imaginary frequency `iω`.
pub fn kernels_imag_axis(omega: f64, geom: &SlabGeometry, model: &MaterialModel, quad: &QuadratureSpec) -> Result<KernelPair> {
    kernels_imag_axis_for(omega, geom, model, Coupling::Magnetic, quad)
}

/// [`kernels_imag_axis`] for either coupling.
pub fn kernels_imag_axis_for(
    omega: f64,
    geom: &SlabGeometry,
    model: &MaterialModel,
    coupling: Coupling,
    quad: &QuadratureSpec,
) -> Result<KernelPair> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain(format!("imaginary frequency must be positive, got {omega}")));
    }
    let reflector = Reflector::for_model(model, omega, geom.z / C_LIGHT, geom.thickness_ratio(), quad)?;
    let (kp, kz) = kernels_reduced(omega * geom.z / C_LIGHT, &reflector, coupling, quad)?;
    let scale = (2.0 * geom.z).powi(3);
    Ok(KernelPair { parallel: kp / scale, perp: kz / scale, reduced_parallel: kp, reduced_perp: kz })
}

/// Slab response on the real frequency axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RealAxisResponse {
    PerfectConductor,
    /// Complex ε(ω), Im ε ≥ 0.
    Dielectric(Complex64),
}

/// Diagonal `(xx = yy, zz)` of ∇×G^S×∇ at equal positions, real frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurlGreenReal {
    /// m⁻³.
    pub parallel: Complex64,
    pub perp: Complex64,
    /// (2z)³ times the above.
    pub reduced_parallel: Complex64,
    pub reduced_perp: Complex64,
}

fn real_axis_coefficients(eta0: Complex64, big_k: f64, response: RealAxisResponse, thickness: Option<f64>) -> (Complex64, Complex64) {
    let eps = match response {
        RealAxisResponse::PerfectConductor => return (Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)),
        RealAxisResponse::Dielectric(eps) => eps,
    };
    let mut eta = (eta0 * eta0 + (eps - 1.0) * big_k * big_k).sqrt();
    if eta.im < 0.0 || (eta.im == 0.0 && eta.re < 0.0) {
        eta = -eta;
    }
    let r_s = (eta0 - eta) / (eta0 + eta);
    let r_p = (eps * eta0 - eta) / (eps * eta0 + eta);
    match thickness {
        None => (r_p, r_s),
        Some(h) => {
            let phase = (Complex64::new(0.0, 2.0) * eta * h).exp();
            let one = Complex64::new(1.0, 0.0);
            let c = |r: Complex64| r * (one - phase) / (one - r * r * phase);
            (c(r_p), c(r_s))
        }
    }
}

/// Real-axis curl-curl scattering tensor.
///
/// With `K = kz` and `η = η₀z`, the reduced components are
/// `(i/π)∫ dλ λ/η₀ e^{2iη}[K²C_N − η²C_M]` and `(i/π)∫ dλ λ/η₀ e^{2iη} 2λ²C_M`.
/// The propagating range `λ < k` is integrated in `η ∈ [0, K]`, cut at every
/// half period of `e^{2iη}`; the evanescent range uses `η = iv`.
pub fn curl_green_real(omega: f64, geom: &SlabGeometry, response: RealAxisResponse, quad: &QuadratureSpec) -> Result<CurlGreenReal> {
    curl_green_real_for(omega, geom, response, Coupling::Magnetic, quad)
}

/// [`curl_green_real`] for either coupling; the electric form is the
/// `(ω²/c²)`-weighted Green tensor itself.
pub fn curl_green_real_for(
    omega: f64,
    geom: &SlabGeometry,
    response: RealAxisResponse,
    coupling: Coupling,
    quad: &QuadratureSpec,
) -> Result<CurlGreenReal> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain(format!("frequency must be positive, got {omega}")));
    }
    if let RealAxisResponse::Dielectric(eps) = response {
        if eps.im < 0.0 {
            return Err(Error::domain("real-axis ε must have non-negative imaginary part"));
        }
        if eps == Complex64::new(1.0, 0.0) {
            let zero = Complex64::new(0.0, 0.0);
            return Ok(CurlGreenReal { parallel: zero, perp: zero, reduced_parallel: zero, reduced_perp: zero });
        }
    }
    let big_k = omega * geom.z / C_LIGHT;
    let thickness = geom.thickness_ratio();
    let i = Complex64::new(0.0, 1.0);

    // propagating: ∫₀^K dη (...) e^{2iη}
    let brackets = |eta0: Complex64, lam2: Complex64| {
        let (c_n, c_m) = coupling.arrange(real_axis_coefficients(eta0, big_k, response, thickness));
        (big_k * big_k * c_n - eta0 * eta0 * c_m, 2.0 * lam2 * c_m)
    };
    let propagating = |eta: f64| {
        let e0 = Complex64::new(eta, 0.0);
        let (p, z) = brackets(e0, Complex64::new(big_k * big_k - eta * eta, 0.0));
        let phase = (2.0 * i * eta).exp();
        (p * phase, z * phase)
    };
    let half_period = 0.5 * PI;
    let panels = (big_k / half_period).ceil().max(1.0) as usize;
    let mut parts: [Vec<f64>; 4] = Default::default();
    let mut prop_error = 0.0;
    let mut prop_ok = true;
    // Each panel nearly cancels; its error is judged against the K² envelope
    // of the integrand rather than the (tiny) panel value.
    let panel_spec = QuadratureSpec { abs_tol: quad.abs_tol.max(0.1 * quad.rel_tol * big_k * half_period), ..*quad };
    for m in 0..panels {
        let a = m as f64 * half_period;
        let b = ((m + 1) as f64 * half_period).min(big_k);
        if b <= a {
            continue;
        }
        let components: [&dyn Fn(f64) -> f64; 4] = [
            &|e| propagating(e).0.re,
            &|e| propagating(e).0.im,
            &|e| propagating(e).1.re,
            &|e| propagating(e).1.im,
        ];
        for (slot, f) in parts.iter_mut().zip(components) {
            let r = integrate_adaptive(f, a, Upper::Finite(b), &panel_spec, SingularEndpoints::NONE);
            prop_ok &= r.converged;
            prop_error += r.error_estimate;
            slot.push(r.value);
        }
    }
    let sum = |v: &Vec<f64>| neumaier_sum(v.iter().copied());
    let prop_par = Complex64::new(sum(&parts[0]), sum(&parts[1]));
    let prop_perp = Complex64::new(sum(&parts[2]), sum(&parts[3]));
    if !prop_ok {
        return Err(Error::OscillatoryNotConverged {
            what: "propagating part of the real-axis Green tensor".into(),
            achieved: prop_error,
            requested: quad.abs_tol.max(quad.rel_tol * (prop_par.norm() + prop_perp.norm())),
        });
    }

    // evanescent: η₀ = iv, λ dλ/η₀ = −i dv
    let evanescent = |v: f64| {
        let e0 = Complex64::new(0.0, v);
        let (p, z) = brackets(e0, Complex64::new(big_k * big_k + v * v, 0.0));
        let damp = (-2.0 * v).exp();
        (-i * p * damp, -i * z * damp)
    };
    let tail = quad.with_tail(TailPolicy::ExponentialBound { decay_length: 0.5 });
    let mut ev = [0.0; 4];
    let evf: [&dyn Fn(f64) -> f64; 4] = [
        &|v| evanescent(v).0.re,
        &|v| evanescent(v).0.im,
        &|v| evanescent(v).1.re,
        &|v| evanescent(v).1.im,
    ];
    for (slot, f) in ev.iter_mut().zip(evf) {
        let r = integrate_adaptive(f, 0.0, Upper::Infinite, &tail, SingularEndpoints::NONE);
        *slot = r.require("evanescent part of the real-axis Green tensor", &tail)?;
    }
    let ev_par = Complex64::new(ev[0], ev[1]);
    let ev_perp = Complex64::new(ev[2], ev[3]);

    let pref = i / PI;
    let reduced_parallel = pref * (prop_par + ev_par);
    let reduced_perp = pref * (prop_perp + ev_perp);
    let scale = (2.0 * geom.z).powi(3);
    Ok(CurlGreenReal { parallel: reduced_parallel / scale, perp: reduced_perp / scale, reduced_parallel, reduced_perp })
}
