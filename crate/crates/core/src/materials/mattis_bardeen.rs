//! Zero-temperature Mattis–Bardeen conductivity of a BCS superconductor.
//!
//! Everything here is in units of the gap: `w = ħω/Δ = 1/q`, energies `x` in
//! units of Δ, and the impurity broadening `b = ħ/(τΔ)`. Results are
//! normalised to the normal-state conductivity σ_n.
//!
//! With `u₁(x) = sgn(x)√(x²−1)` for `|x| > 1`, `u₁(x) = −i√(1−x²)` for `|x| < 1`,
//! `u₂(x) = √((x+w)²−1)` and `g = (x²+1+wx)/(u₁u₂)`:
//!
//! * clean: `σ/σ_n = (1/w)∫_{1−w}^{1} g dx`. On `[1−w, −1]` (only for `w > 2`)
//!   `g` is real and gives σ₁; on `[max(1−w, −1), 1]` it is imaginary and gives σ₂.
//! * impure: `σ₂ + iσ₁` from the finite integral over `[1−w, 1]` and a
//!   semi-infinite one over `[1, ∞)`, prefactor `b/(2w)`. On `|x| < 1` the two
//!   finite-part terms are complex conjugates up to sign, so that stretch feeds
//!   σ₂ only; the semi-infinite part is real and also feeds σ₂ only.
//!
//! All square roots are taken of explicitly factored non-negative arguments
//! such as `(x+w−1)(x+w+1)`, where each factor is a distance to a segment end
//! known exactly; the branch of `u₁` is fixed by hand.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_adaptive, QuadratureResult, QuadratureSpec, SingularEndpoints, TailPolicy, Upper};

/// σ/σ_n at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexConductivity {
    pub sigma1_over_sigman: f64,
    pub sigma2_over_sigman: f64,
    /// Angular frequency, rad/s (or `ħω/Δ` for the reduced entry points).
    pub omega: f64,
}

fn check_w(w: f64) -> Result<()> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::domain(format!("ħω/Δ must be positive and finite, got {w}")));
    }
    Ok(())
}

/// Integrates `h(x, d_left, d_right)` over `[a, b]` where both ends may carry
/// inverse-square-root singularities. The interval is split at `split`, and
/// each half is parameterised by the exact distance to its outer end.
fn two_sided<H>(h: H, a: f64, b: f64, split: f64, spec: &QuadratureSpec) -> QuadratureResult
where
    H: Fn(f64, f64, f64) -> f64,
{
    let len = b - a;
    let left_len = split - a;
    let right_len = b - split;
    let left = integrate_adaptive(|t| h(a + t, t, len - t), 0.0, Upper::Finite(left_len), spec, SingularEndpoints::LEFT);
    let right = integrate_adaptive(|r| h(b - r, len - r, r), 0.0, Upper::Finite(right_len), spec, SingularEndpoints::LEFT);
    QuadratureResult {
        value: left.value + right.value,
        error_estimate: left.error_estimate + right.error_estimate,
        evaluations: left.evaluations + right.evaluations,
        converged: left.converged && right.converged,
    }
}

/// Pieces of the integrand on `[1−w, −1]`, where `u₁ = −p` and everything is real.
struct BelowGap {
    /// `N = x² + 1 + wx`.
    n: f64,
    /// `p = √(x²−1)`.
    p: f64,
    u2: f64,
}

fn below_gap(x: f64, dl: f64, dr: f64) -> BelowGap {
    // x = 1 − w + dl = −1 − dr
    let p = (dr * (2.0 + dr)).sqrt();
    let u2 = (dl * (dl + 2.0)).sqrt();
    let n = x * (1.0 + dl) + 1.0;
    BelowGap { n, p, u2 }
}

/// Pieces on `[A, 1]` with `A = max(1−w, −1)`, where `u₁ = −i a`.
struct InGap {
    n: f64,
    a: f64,
    u2: f64,
}

fn in_gap(w: f64, lower: f64, x: f64, dl: f64, dr: f64) -> InGap {
    // 1 − x = dr exactly; 1 + x and x + w − 1 come from the left end.
    let one_plus_x = (lower + 1.0) + dl;
    let a = (dr * one_plus_x).sqrt();
    let xw_minus_1 = (lower + w - 1.0) + dl;
    let u2 = (xw_minus_1 * (xw_minus_1 + 2.0)).sqrt();
    let n = x * (x + w) + 1.0;
    InGap { n, a, u2 }
}

/// Clean-limit σ/σ_n at reduced frequency `w = ħω/Δ`.
pub fn sigma_clean_reduced(w: f64, spec: &QuadratureSpec) -> Result<ComplexConductivity> {
    check_w(w)?;
    let s1 = if w > 2.0 {
        let r = two_sided(
            |x, dl, dr| {
                let t = below_gap(x, dl, dr);
                // g = N / (u₁u₂) with u₁ = −p
                -t.n / (t.p * t.u2)
            },
            1.0 - w,
            -1.0,
            -0.5 * w,
            spec,
        );
        r.require("Mattis-Bardeen sigma1", spec)? / w
    } else {
        0.0
    };
    let lower = (1.0 - w).max(-1.0);
    let r = two_sided(
        |x, dl, dr| {
            let t = in_gap(w, lower, x, dl, dr);
            t.n / (t.a * t.u2)
        },
        lower,
        1.0,
        0.5 * (lower + 1.0),
        spec,
    );
    let s2 = r.require("Mattis-Bardeen sigma2", spec)? / w;
    Ok(ComplexConductivity { sigma1_over_sigman: s1.max(0.0), sigma2_over_sigman: s2, omega: w })
}

/// σ₁/σ_n with impurity broadening `b = ħ/(τΔ)`; only `[1−w, −1]` contributes.
fn impure_sigma1(w: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if w <= 2.0 {
        return Ok(0.0);
    }
    let r = two_sided(
        |x, dl, dr| {
            let t = below_gap(x, dl, dr);
            let g = -t.n / (t.p * t.u2);
            // u₂ − u₁ = u₂ + p, u₂ + u₁ = u₂ − p
            let first = Complex64::new(g + 1.0, 0.0) / Complex64::new(t.u2 + t.p, b);
            let second = Complex64::new(g - 1.0, 0.0) / Complex64::new(t.u2 - t.p, -b);
            -(first - second).im
        },
        1.0 - w,
        -1.0,
        -0.5 * w,
        spec,
    );
    Ok(r.require("impure Mattis-Bardeen sigma1", spec)? * b / (2.0 * w))
}

/// σ/σ_n with impurity broadening `b = ħ/(τΔ)` at reduced frequency `w`.
///
/// σ₁ is taken as minus the imaginary part of the bracketed integrals; with
/// this sign σ₁ ≥ 0 and the result approaches the clean form as `b` grows.
pub fn sigma_impure_reduced(w: f64, b: f64, spec: &QuadratureSpec) -> Result<ComplexConductivity> {
    check_w(w)?;
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::domain(format!("ħ/τΔ must be positive and finite, got {b}")));
    }
    let s1 = impure_sigma1(w, b, spec)?;

    let mut s2 = 0.0;
    if w > 2.0 {
        let r = two_sided(
            |x, dl, dr| {
                let t = below_gap(x, dl, dr);
                let g = -t.n / (t.p * t.u2);
                let first = Complex64::new(g + 1.0, 0.0) / Complex64::new(t.u2 + t.p, b);
                let second = Complex64::new(g - 1.0, 0.0) / Complex64::new(t.u2 - t.p, -b);
                (first - second).re
            },
            1.0 - w,
            -1.0,
            -0.5 * w,
            spec,
        );
        s2 += r.require("impure Mattis-Bardeen sigma2 (below gap)", spec)?;
    }

    // |x| < 1: 2 Re[(1 + iG)/(u₂ + i(a + b))] with g = iG
    let lower = (1.0 - w).max(-1.0);
    let r = two_sided(
        |x, dl, dr| {
            let t = in_gap(w, lower, x, dl, dr);
            let big_g = t.n / (t.a * t.u2);
            let c = t.a + b;
            2.0 * (t.u2 + big_g * c) / (t.u2 * t.u2 + c * c)
        },
        lower,
        1.0,
        0.5 * (lower + 1.0),
        spec,
    );
    s2 += r.require("impure Mattis-Bardeen sigma2 (in gap)", spec)?;

    s2 -= impure_tail(w, b, spec)?;
    Ok(ComplexConductivity { sigma1_over_sigman: s1, sigma2_over_sigman: s2 * b / (2.0 * w), omega: w })
}

/// `∫₁^∞ 2(g−1)(u₁+u₂)/((u₁+u₂)² + b²) dx`.
fn impure_tail(w: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    let integrand = |d: f64| {
        // x = 1 + d
        let x = 1.0 + d;
        let u1 = (d * (d + 2.0)).sqrt();
        let u2 = ((x + w) * (x + w) - 1.0).sqrt();
        let n = x * (x + w) + 1.0;
        let prod = u1 * u2;
        // g − 1 = (2x+w)² / (u₁u₂ (N + u₁u₂))
        let g_minus_1 = (2.0 * x + w).powi(2) / (prod * (n + prod));
        let s = u1 + u2;
        2.0 * g_minus_1 * s / (s * s + b * b)
    };
    let head = integrate_adaptive(integrand, 0.0, Upper::Finite(1.0), spec, SingularEndpoints::LEFT);
    // for x ≥ 2 the integrand is below 32/(3√3 (2+w) x²)
    let majorant = 32.0 / (3.0 * 3f64.sqrt() * (2.0 + w));
    let tail_spec = spec.with_tail(TailPolicy::PowerBound { majorant });
    let tail = integrate_adaptive(|t| integrand(t - 1.0), 2.0, Upper::Infinite, &tail_spec, SingularEndpoints::NONE);
    Ok(head.require("impure Mattis-Bardeen tail head", spec)? + tail.require("impure Mattis-Bardeen tail", &tail_spec)?)
}

/// σ₁/σ_n only, clean or impure; used by the Kramers–Kronig continuum.
pub(crate) fn sigma1_reduced(w: f64, impurity: Option<f64>, spec: &QuadratureSpec) -> Result<f64> {
    match impurity {
        None => Ok(sigma_clean_reduced(w, spec)?.sigma1_over_sigman),
        Some(b) => impure_sigma1(w, b, spec),
    }
}

/// `f(x) = 2 ln(x/2 + √((x/2)²−1)) / (π √((x/2)²−1))`, continued through `x = 2`
/// with the equivalent arccos form so it stays real for `x < 2`.
pub fn f_impurity(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::domain(format!("impurity parameter must be positive, got {x}")));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let pi = std::f64::consts::PI;
    if x > 2.0 {
        let e = 0.5 * x - 1.0;
        let root = (e * (2.0 + e)).sqrt();
        Ok(2.0 * (e + root).ln_1p() / (pi * root))
    } else if x < 2.0 {
        // acos(1 − d) = 2 asin(√(d/2))
        let d = 1.0 - 0.5 * x;
        let root = (d * (2.0 - d)).sqrt();
        Ok(4.0 * (0.5 * d).sqrt().asin() / (pi * root))
    } else {
        Ok(2.0 / pi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    /// Complete elliptic integrals K(k), E(k) by the arithmetic-geometric mean.
    fn elliptic_ke(k: f64) -> (f64, f64) {
        let mut a = 1.0_f64;
        let mut b = (1.0 - k * k).sqrt();
        let mut c = k;
        let mut sum = 0.5 * c * c;
        let mut pow = 0.5;
        for _ in 0..60 {
            let an = 0.5 * (a + b);
            let bn = (a * b).sqrt();
            c = 0.5 * (a - b);
            pow *= 2.0;
            sum += pow * c * c;
            a = an;
            b = bn;
            if c.abs() < 1e-17 {
                break;
            }
        }
        let kk = std::f64::consts::PI / (2.0 * a);
        (kk, kk * (1.0 - sum))
    }

    /// Closed elliptic form of the clean conductivity.
    fn clean_oracle(w: f64) -> (f64, f64) {
        let k = ((w - 2.0) / (w + 2.0)).abs();
        let kp = (1.0 - k * k).sqrt();
        let s1 = if w > 2.0 {
            let (kk, ee) = elliptic_ke(k);
            (1.0 + 2.0 / w) * ee - 4.0 / w * kk
        } else {
            0.0
        };
        let (kk, ee) = elliptic_ke(kp);
        let s2 = 0.5 * ((1.0 + 2.0 / w) * ee - (1.0 - 2.0 / w) * kk);
        (s1, s2)
    }

    #[test]
    fn agm_oracle_sanity() {
        let (kk, ee) = elliptic_ke(0.0);
        assert_relative_eq!(kk, std::f64::consts::FRAC_PI_2, max_relative = 1e-15);
        assert_relative_eq!(ee, std::f64::consts::FRAC_PI_2, max_relative = 1e-15);
        // K(1/√2) = Γ(1/4)² / (4√π)
        let (kk, _) = elliptic_ke(std::f64::consts::FRAC_1_SQRT_2);
        assert_relative_eq!(kk, 1.854_074_677_301_372, max_relative = 1e-14);
    }

    #[test]
    fn clean_matches_elliptic_form() {
        for q in [100.0, 5.0, 1.0, 0.6, 0.51, 0.49, 0.4, 0.3, 0.2, 0.1, 0.02] {
            let w = 1.0 / q;
            let s = sigma_clean_reduced(w, &spec()).unwrap();
            let (s1, s2) = clean_oracle(w);
            assert!((s.sigma1_over_sigman - s1).abs() <= 1e-8 * (1.0 + s1), "q={q}: {} vs {s1}", s.sigma1_over_sigman);
            assert_relative_eq!(s.sigma2_over_sigman, s2, max_relative = 1e-8);
        }
    }

    #[test]
    fn clean_sigma1_vanishes_inside_gap() {
        for q in [0.5, 0.6, 0.8, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 1e3] {
            assert_eq!(sigma_clean_reduced(1.0 / q, &spec()).unwrap().sigma1_over_sigman, 0.0);
        }
    }

    #[test]
    fn clean_low_frequency_asymptote() {
        let s = sigma_clean_reduced(0.01, &spec()).unwrap();
        assert!((s.sigma2_over_sigman / (100.0 * std::f64::consts::PI) - 1.0).abs() < 0.01);
    }

    #[test]
    fn clean_is_continuous_at_gap_edge() {
        let at = sigma_clean_reduced(2.0, &spec()).unwrap();
        let below = sigma_clean_reduced(2.0 - 1e-9, &spec()).unwrap();
        let above = sigma_clean_reduced(2.0 + 1e-9, &spec()).unwrap();
        assert_eq!(at.sigma1_over_sigman, 0.0);
        assert!((below.sigma2_over_sigman - above.sigma2_over_sigman).abs() < 1e-6);
        assert!((at.sigma2_over_sigman - above.sigma2_over_sigman).abs() < 1e-6);
        assert!(above.sigma1_over_sigman < 1e-6);
    }

    #[test]
    fn impure_reference_values() {
        // high-precision references for ħ/τΔ = 13.61
        let s = sigma_impure_reduced(5.0, 13.61, &spec()).unwrap();
        assert_relative_eq!(s.sigma1_over_sigman, 0.702_304_525_5, max_relative = 1e-8);
        assert_relative_eq!(s.sigma2_over_sigman, 0.288_304_859_1, max_relative = 1e-8);
        let s = sigma_impure_reduced(0.01, 13.61, &spec()).unwrap();
        assert_relative_eq!(s.sigma2_over_sigman, 236.745_465, max_relative = 1e-8);
        assert_eq!(s.sigma1_over_sigman, 0.0);
    }

    #[test]
    fn impure_low_frequency_asymptote() {
        let b = 13.61;
        let f = f_impurity(b).unwrap();
        for q in [50.0, 100.0, 300.0] {
            let s = sigma_impure_reduced(1.0 / q, b, &spec()).unwrap();
            let pred = std::f64::consts::PI * q * (1.0 - f);
            assert!(((s.sigma2_over_sigman - pred) / (std::f64::consts::PI * q)).abs() < 0.01);
        }
    }

    #[test]
    fn strong_broadening_recovers_clean_form() {
        for q in [0.1, 0.2, 0.4, 1.0, 10.0] {
            let w = 1.0 / q;
            let c = sigma_clean_reduced(w, &spec()).unwrap();
            // the broadened form approaches the clean one like ln(b)/b
            let i = sigma_impure_reduced(w, 1e7, &spec()).unwrap();
            assert_relative_eq!(i.sigma2_over_sigman, c.sigma2_over_sigman, max_relative = 1e-4);
            assert!((i.sigma1_over_sigman - c.sigma1_over_sigman).abs() <= 1e-4 * c.sigma1_over_sigman.max(1e-12));
        }
    }

    #[test]
    fn impure_decays_at_high_frequency() {
        let a = sigma_impure_reduced(100.0, 13.61, &spec()).unwrap();
        let b = sigma_impure_reduced(1000.0, 13.61, &spec()).unwrap();
        let mag = |s: ComplexConductivity| s.sigma1_over_sigman.hypot(s.sigma2_over_sigman);
        assert!(mag(b) < 0.1);
        assert!(mag(b) < mag(a));
        assert!(a.sigma1_over_sigman >= 0.0 && b.sigma1_over_sigman >= 0.0);
    }

    #[test]
    fn f_function_values() {
        assert!((f_impurity(2.0).unwrap() - 2.0 / std::f64::consts::PI).abs() < 1e-15);
        assert!((f_impurity(2.0 + 1e-9).unwrap() - 2.0 / std::f64::consts::PI).abs() < 1e-9);
        assert!((f_impurity(2.0 - 1e-9).unwrap() - 2.0 / std::f64::consts::PI).abs() < 1e-9);
        assert_relative_eq!(f_impurity(13.61).unwrap(), 0.246_411_300_509_857, max_relative = 1e-13);
        assert!(f_impurity(1e12).unwrap() < 1e-10);
        assert!(f_impurity(0.0).is_err());
        // x < 2 branch against the logarithmic form continued to complex argument:
        // f(1) = 2 acos(1/2) / (π √(3/4)) = 4 / (3√3)
        assert_relative_eq!(f_impurity(1.0).unwrap(), 4.0 / (3.0 * 3f64.sqrt()), max_relative = 1e-14);
    }

    #[test]
    fn f_function_is_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..200 {
            let v = f_impurity(0.1 * i as f64).unwrap();
            assert!(v < prev && (0.0..1.5).contains(&v));
            prev = v;
        }
    }
}
