//! Single-point evaluations printed as `key=value` lines.

use anyhow::{anyhow, bail, Result};
use cpslab::forces::{force_point, moment_prefactor};
use cpslab::materials::{sigma_clean_reduced, sigma_impure_reduced};
use cpslab::shifts::{free_rate, ground_shift, spin_flip_rate};
use cpslab::units::{to_angular_frequency, FrequencyUnit};
use cpslab::{Coupling, PhysicalConstants, SlabGeometry, Transition, TransitionSet};

use crate::config::RunConfig;
use crate::csvio::fmt_sci;

pub type Lines = Vec<(String, String)>;

pub fn render(lines: &Lines) -> String {
    lines.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}

fn num(key: impl Into<String>, v: f64) -> (String, String) {
    (key.into(), fmt_sci(v))
}

fn tag(c: Coupling) -> &'static str {
    match c {
        Coupling::Magnetic => "M",
        Coupling::Electric => "E",
    }
}

/// ε(iω) of the configured material at imaginary frequency `ħω = at_ev`.
pub fn epsilon(config: &RunConfig, at_ev: f64) -> Result<Lines> {
    let consts = PhysicalConstants::default();
    let quad = config.quadrature_spec()?;
    let model = config.material(&consts)?.physical(config.omega_a(&consts)?)?;
    let omega = to_angular_frequency(at_ev, FrequencyUnit::ElectronVolt, &consts)?;
    let eps = model.epsilon_imag_axis(omega, &quad)?;
    Ok(vec![("model".into(), model.name().into()), num("omega_ev", at_ev), num("epsilon_imag_axis", eps)])
}

/// σ/σ_n at `q = Δ/ħω`, clean unless `impurity` is given.
pub fn sigma(config: &RunConfig, q: f64) -> Result<Lines> {
    if !(q > 0.0) || !q.is_finite() {
        bail!("q must be positive and finite, got {q}");
    }
    let quad = config.quadrature_spec()?;
    let s = match config.material.impurity {
        None => sigma_clean_reduced(1.0 / q, &quad)?,
        Some(b) => sigma_impure_reduced(1.0 / q, b, &quad)?,
    };
    let mut out = vec![num("q", q)];
    if let Some(b) = config.material.impurity {
        out.push(num("impurity", b));
    }
    out.extend([num("sigma1_over_sigman", s.sigma1_over_sigman), num("sigma2_over_sigman", s.sigma2_over_sigman)]);
    Ok(out)
}

fn distance(config: &RunConfig, omega_a: f64, consts: &PhysicalConstants) -> Result<f64> {
    match (config.geometry.z_m, config.geometry.x) {
        (Some(z), None) => Ok(z),
        (None, Some(x)) => Ok(x * consts.c / omega_a),
        (Some(_), Some(_)) => bail!("give only one of `geometry.z_m` and `geometry.x`"),
        (None, None) => Err(anyhow!("missing required key `geometry.z_m` (flag --z-m)")),
    }
}

fn transitions(config: &RunConfig, omega_a: f64, consts: &PhysicalConstants) -> Result<Vec<Transition>> {
    let weights = config.weights();
    config
        .couplings()?
        .into_iter()
        .map(|c| match c {
            Coupling::Magnetic => Ok(Transition::magnetic(omega_a, weights, consts)?),
            Coupling::Electric => {
                let d = config
                    .transition
                    .dipole_cm
                    .ok_or_else(|| anyhow!("missing required key `transition.dipole_cm` (flag --dipole-cm)"))?;
                Ok(Transition::electric(omega_a, weights, d)?)
            }
        })
        .collect()
}

/// Ground-state shift (`rate = false`) or spin-flip rate (`rate = true`) at `geometry.z_m`.
pub fn shift_or_rate(config: &RunConfig, rate: bool) -> Result<Lines> {
    let consts = PhysicalConstants::default();
    let quad = config.quadrature_spec()?;
    let omega_a = config.require_omega_a(&consts)?;
    let model = config.material(&consts)?.physical(Some(omega_a))?;
    let z = distance(config, omega_a, &consts)?;
    let geom = SlabGeometry::new(z, config.thickness_ratio(Some(z))?.map(|r| r * z))?;
    let mut out = vec![num("z_m", z), num("x", omega_a * z / consts.c)];
    for t in transitions(config, omega_a, &consts)? {
        let set = TransitionSet::single(t);
        let k = tag(t.kind);
        if rate {
            let g = spin_flip_rate(&geom, &set, &model, &consts, &quad)?;
            out.extend([num(format!("gamma_{k}_rad_s"), g), num(format!("gamma_ratio_{k}"), g / free_rate(&t, &consts))]);
        } else {
            let s = ground_shift(&geom, &set, &model, &consts, &quad)?;
            out.push(num(format!("delta_omega_{k}_rad_s"), s.delta_omega));
        }
    }
    Ok(out)
}

/// Dimensionless force (and newtons when ω_A is known) at `geometry.x` or `geometry.z_m`.
pub fn force(config: &RunConfig) -> Result<Lines> {
    let consts = PhysicalConstants::default();
    let quad = config.quadrature_spec()?;
    let omega_a = config.omega_a(&consts)?;
    let (x, z) = match (config.geometry.x, config.geometry.z_m, omega_a) {
        (Some(_), Some(_), _) => bail!("give only one of `geometry.x` and `geometry.z_m`"),
        (Some(x), None, w) => (x, w.map(|w| x * consts.c / w)),
        (None, Some(z), Some(w)) => (w * z / consts.c, Some(z)),
        (None, Some(_), None) => return Err(anyhow!("missing required key `transition.omega_ev` (flag --omega-ev)")),
        (None, None, _) => return Err(anyhow!("missing required key `geometry.x` (flag --x)")),
    };
    let reduced = config.material(&consts)?.reduced(omega_a)?;
    let ratio = config.thickness_ratio(z)?;
    let mut out = vec![num("x", x)];
    if let Some(z) = z {
        out.push(num("z_m", z));
    }
    for c in config.couplings()? {
        let k = tag(c);
        let p = force_point(x, config.weights(), &reduced, ratio, c, &quad)?;
        out.extend([
            num(format!("ibar_parallel_{k}"), p.ibar_parallel),
            num(format!("ibar_perp_{k}"), p.ibar_perp),
            num(format!("F_{k}"), p.value),
            (format!("regime_{k}"), p.regime.name().to_string()),
        ]);
        if let Some(pred) = p.prediction {
            out.push(num(format!("prediction_{k}"), pred));
        }
        let moment = match c {
            Coupling::Magnetic => Some(consts.spin_moment()),
            Coupling::Electric => config.transition.dipole_cm,
        };
        if let (Some(z), Some(m)) = (z, moment) {
            out.push(num(format!("F_{k}_newton"), moment_prefactor(z, m, c, &consts) * p.value));
        }
    }
    Ok(out)
}
