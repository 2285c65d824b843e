//! Adaptive Gauss–Kronrod integration.
//!
//! One engine serves every integral in the crate:
//!
//! * finite intervals, optionally with inverse-square-root endpoint
//!   singularities (removed by `x = a + s²` before subdivision);
//! * semi-infinite intervals whose integrand either decays exponentially
//!   ([`TailPolicy::ExponentialBound`]) or is dominated by `C/x²`
//!   ([`TailPolicy::PowerBound`]);
//! * the Lorentzian-weighted frequency integral through its `x → 1/x`
//!   split, [`modular_split`].
//!
//! Subdivision is global: the panel with the largest error estimate is bisected
//! until the summed estimate meets `max(abs_tol, rel_tol·|value|)`. The panel
//! list is scanned in order, so results are bitwise reproducible.

use crate::error::{Error, Result};

// 21-point Kronrod abscissae (descending), the 10-point Gauss rule sits on the
// odd entries.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_053_930,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// How a semi-infinite range is cut down to a finite one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailPolicy {
    /// The integrand decays at least like `exp(-x / decay_length)`. The cut
    /// `x_T` is found by doubling until `|f(x_T)|·decay_length` falls below a
    /// tenth of the tolerance.
    ExponentialBound { decay_length: f64 },
    /// `|f(x)| ≤ majorant / x²` beyond the lower limit, so the tail past `X` is
    /// at most `majorant / X`; `X` is chosen so that this is a tenth of `abs_tol`.
    PowerBound { majorant: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub tail_policy: TailPolicy,
    /// Split point ε of [`modular_split`].
    pub epsilon_split: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            tail_policy: TailPolicy::ExponentialBound { decay_length: 1.0 },
            epsilon_split: 1.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions < 10 {
            return Err(Error::domain("max_subdivisions must be at least 10"));
        }
        if !(self.epsilon_split > 0.0) || !self.epsilon_split.is_finite() {
            return Err(Error::domain("epsilon_split must be positive and finite"));
        }
        Ok(())
    }

    pub fn with_tail(mut self, tail_policy: TailPolicy) -> Self {
        self.tail_policy = tail_policy;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_epsilon_split(mut self, epsilon_split: f64) -> Self {
        self.epsilon_split = epsilon_split;
        self
    }

    /// Tolerances for an integral nested inside another one: two decades
    /// tighter, floored near round-off.
    pub fn nested(&self) -> Self {
        Self {
            rel_tol: (self.rel_tol * 1e-2).max(5e-15),
            abs_tol: (self.abs_tol * 1e-2).max(1e-300),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadratureResult {
    fn zero() -> Self {
        Self { value: 0.0, error_estimate: 0.0, evaluations: 0, converged: true }
    }

    fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            ..self
        }
    }

    /// Turns a non-converged result into [`Error::NotConverged`].
    pub fn require(self, what: &str, spec: &QuadratureSpec) -> Result<f64> {
        if self.converged && self.value.is_finite() {
            Ok(self.value)
        } else {
            Err(Error::NotConverged {
                what: what.to_string(),
                achieved: self.error_estimate,
                requested: spec.abs_tol.max(spec.rel_tol * self.value.abs()),
            })
        }
    }
}

/// Upper integration limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Upper {
    Finite(f64),
    /// +∞, cut according to the spec's [`TailPolicy`].
    Infinite,
}

/// Endpoints where the integrand may diverge like `(distance)^(-1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SingularEndpoints {
    pub left: bool,
    pub right: bool,
}

impl SingularEndpoints {
    pub const NONE: Self = Self { left: false, right: false };
    pub const LEFT: Self = Self { left: true, right: false };
    pub const RIGHT: Self = Self { left: false, right: true };
    pub const BOTH: Self = Self { left: true, right: true };
}

/// Integrates `f` over `[a, upper]`.
pub fn integrate_adaptive<F>(f: F, a: f64, upper: Upper, spec: &QuadratureSpec, singular: SingularEndpoints) -> QuadratureResult
where
    F: Fn(f64) -> f64,
{
    match upper {
        Upper::Finite(b) => integrate_finite(&f, a, b, spec, singular),
        Upper::Infinite => integrate_semi_infinite(&f, a, spec, singular.left),
    }
}

/// Plain finite-interval integral without singular endpoints.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> QuadratureResult
where
    F: Fn(f64) -> f64,
{
    integrate_finite(&f, a, b, spec, SingularEndpoints::NONE)
}

/// `(ω/π) ∫₀^∞ dω' F(ω') / (ω² + ω'²)` evaluated as
/// `(1/π) [∫₀^ε dx F(ωx)/(1+x²) + ∫₀^{1/ε} dx F(ω/x)/(1+x²)]`
/// with ε = `spec.epsilon_split`.
pub fn modular_split<F>(f: F, omega: f64, spec: &QuadratureSpec) -> QuadratureResult
where
    F: Fn(f64) -> f64,
{
    let eps = spec.epsilon_split;
    let low = integrate(|x| f(omega * x) / (1.0 + x * x), 0.0, eps, spec);
    let high = integrate(
        |x| {
            if x == 0.0 {
                return 0.0;
            }
            f(omega / x) / (1.0 + x * x)
        },
        0.0,
        1.0 / eps,
        spec,
    );
    low.combine(high).scaled(std::f64::consts::FRAC_1_PI)
}

/// [`modular_split`] of a fallible integrand; the first error is returned.
pub(crate) fn modular_split_try<F>(f: F, omega: f64, spec: &QuadratureSpec, what: &str) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let failure = std::cell::RefCell::new(None);
    let r = modular_split(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        omega,
        spec,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    r.require(what, spec)
}

fn integrate_finite<F>(f: &F, a: f64, b: f64, spec: &QuadratureSpec, singular: SingularEndpoints) -> QuadratureResult
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return QuadratureResult::zero();
    }
    if b < a {
        let r = integrate_finite(f, b, a, spec, SingularEndpoints { left: singular.right, right: singular.left });
        return r.scaled(-1.0);
    }
    match (singular.left, singular.right) {
        (false, false) => adaptive(f, a, b, spec),
        (true, false) => {
            let g = |s: f64| 2.0 * s * f(a + s * s);
            adaptive(&g, 0.0, (b - a).sqrt(), spec)
        }
        (false, true) => {
            let g = |s: f64| 2.0 * s * f(b - s * s);
            adaptive(&g, 0.0, (b - a).sqrt(), spec)
        }
        (true, true) => {
            let mid = 0.5 * (a + b);
            integrate_finite(f, a, mid, spec, SingularEndpoints::LEFT)
                .combine(integrate_finite(f, mid, b, spec, SingularEndpoints::RIGHT))
        }
    }
}

fn integrate_semi_infinite<F>(f: &F, a: f64, spec: &QuadratureSpec, left_singular: bool) -> QuadratureResult
where
    F: Fn(f64) -> f64,
{
    match spec.tail_policy {
        TailPolicy::ExponentialBound { decay_length } => {
            let length = decay_length.abs().max(f64::MIN_POSITIVE);
            let head = if left_singular {
                integrate_finite(f, a, a + length, spec, SingularEndpoints::LEFT)
            } else {
                QuadratureResult::zero()
            };
            let start = if left_singular { a + length } else { a };
            let Some((cut, tail_bound)) = exponential_cut(f, start, length, spec) else {
                return QuadratureResult {
                    value: f64::NAN,
                    error_estimate: f64::INFINITY,
                    evaluations: 0,
                    converged: false,
                };
            };
            let mut body = adaptive(f, start, cut, spec);
            body.error_estimate += tail_bound;
            head.combine(body)
        }
        TailPolicy::PowerBound { majorant } => {
            // the log map below needs a positive lower limit
            let base = if a > 0.0 { a } else { 1.0 };
            let head = if a < base || left_singular {
                integrate_finite(f, a, if a < base { base } else { 2.0 * a }, spec, SingularEndpoints { left: left_singular, right: false })
            } else {
                QuadratureResult::zero()
            };
            let start = if a < base { base } else if left_singular { 2.0 * a } else { a };
            let cut = (majorant.abs() / (0.1 * spec.abs_tol)).max(2.0 * start);
            let span = (cut / start).ln();
            let g = |y: f64| {
                let x = start * y.exp();
                x * f(x)
            };
            let mut body = adaptive(&g, 0.0, span, spec);
            body.error_estimate += majorant.abs() / cut;
            head.combine(body)
        }
    }
}

/// Finds a cut-off beyond which an exponentially decaying integrand is negligible.
fn exponential_cut<F>(f: &F, a: f64, length: f64, spec: &QuadratureSpec) -> Option<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let mut peak = 0.0_f64;
    let mut below = 0;
    let mut step = length;
    for _ in 0..64 {
        let x = a + step;
        let v = f(x).abs() * length;
        if !v.is_finite() {
            return None;
        }
        peak = peak.max(v);
        let threshold = 0.1 * spec.abs_tol.max(spec.rel_tol * peak);
        if v < threshold && step >= 4.0 * length {
            below += 1;
            if below == 2 {
                return Some((x, v));
            }
        } else {
            below = 0;
        }
        step *= 2.0;
    }
    None
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn adaptive<F>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> QuadratureResult
where
    F: Fn(f64) -> f64,
{
    let first = kronrod21(f, a, b);
    let mut evaluations = 21;
    let mut panels = vec![first];
    loop {
        let value = neumaier_sum(panels.iter().map(|p| p.value));
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let tolerance = spec.abs_tol.max(spec.rel_tol * value.abs());
        if !value.is_finite() || !error.is_finite() {
            return QuadratureResult { value, error_estimate: f64::INFINITY, evaluations, converged: false };
        }
        if error <= tolerance {
            return QuadratureResult { value, error_estimate: error, evaluations, converged: true };
        }
        if panels.len() >= spec.max_subdivisions {
            return QuadratureResult { value, error_estimate: error, evaluations, converged: false };
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, be), (i, p)| if p.error > be { (i, p.error) } else { (bi, be) });
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // panel too narrow to split: the remaining error is round-off
            return QuadratureResult { value, error_estimate: error, evaluations, converged: error <= 10.0 * tolerance };
        }
        let left = kronrod21(f, p.a, mid);
        let right = kronrod21(f, mid, p.b);
        evaluations += 42;
        panels[worst] = left;
        panels.push(right);
    }
}

fn kronrod21<F>(f: &F, a: f64, b: f64) -> Panel
where
    F: Fn(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = WGK[10] * fc.abs();
    let mut values = [(0.0, 0.0); 10];
    for (j, slot) in values.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        *slot = (f1, f2);
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for (j, (f1, f2)) in values.iter().enumerate() {
        res_asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let scale = half.abs();
    let value = res_k * half;
    res_abs *= scale;
    res_asc *= scale;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value, error }
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut compensation = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}
