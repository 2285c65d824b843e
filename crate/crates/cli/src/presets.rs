//! Figure presets: one sweep configuration per published curve.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use crate::config::{MaterialSection, QuadratureSection, RunConfig};
use crate::csvio::Table;
use crate::sweep::run_sweep;

pub const PRESETS: [&str; 8] = [
    "fig-alpha-sweep",
    "fig-drude-nu-sweep",
    "fig-decca",
    "fig-thickness",
    "fig-sapphire",
    "fig-sigma-mb",
    "fig-dual",
    "fig-sapphire-dual",
];

/// Rubidium hyperfine transition used for the sapphire curves, Hz.
const RUBIDIUM_HZ: f64 = 560e3;
/// ω_A = ω_p curves use ħω_p = 9.0 eV.
const OMEGA_P_EV: f64 = 9.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    /// File stem.
    pub name: String,
    pub config: RunConfig,
}

fn base(preset: &str, curve: &str) -> RunConfig {
    let mut c = RunConfig::default();
    c.meta.preset = Some(preset.into());
    c.meta.curve = Some(curve.into());
    c.transition.weights = Some([0.25; 3]);
    c.transition.coupling = Some("magnetic".into());
    c.sweep.quantity = Some("force".into());
    c.sweep.variable = Some("x".into());
    c.sweep.min = Some(1e-3);
    c.sweep.max = Some(1e2);
    c.sweep.points_per_decade = Some(20);
    c.sweep.scale = Some("log".into());
    c
}

fn curve(preset: &str, name: &str, edit: impl FnOnce(&mut RunConfig)) -> Curve {
    let mut config = base(preset, name);
    edit(&mut config);
    Curve { name: name.to_string(), config }
}

fn model(name: &str) -> MaterialSection {
    MaterialSection { model: Some(name.into()), ..Default::default() }
}

fn plasma_alpha(alpha: f64) -> MaterialSection {
    MaterialSection { alpha: Some(alpha), ..model("plasma") }
}

fn label(v: f64) -> String {
    format!("{v:e}")
}

/// The curves of a preset. `param_file` is only used (and required) by `fig-decca`.
pub fn preset(name: &str, param_file: Option<&Path>) -> Result<Vec<Curve>> {
    let p = name;
    Ok(match name {
        "fig-alpha-sweep" => {
            let mut curves: Vec<Curve> = [1.0, 1e1, 1e2, 1e3, 1e4]
                .iter()
                .map(|&a| curve(p, &format!("alpha_{}", label(a)), |c| c.material = plasma_alpha(a)))
                .collect();
            curves.push(curve(p, "alpha_inf", |c| c.material = model("perfect-conductor")));
            curves
        }
        "fig-drude-nu-sweep" => [0.0, 1.0, 1e1, 1e2, 1e3, 1e4]
            .iter()
            .map(|&nu| {
                curve(p, &format!("nu_bar_{}", label(nu)), |c| {
                    c.material = MaterialSection { alpha: Some(1.0), nu_bar: Some(nu), ..model("drude") }
                })
            })
            .collect(),
        "fig-decca" => {
            let Some(file) = param_file else {
                bail!(
                    "fig-decca needs the six-oscillator (f_j, omega_j, g_j) table for gold, which is not published \
                     with the figure; pass it with --param-file <path> (crates/cli/data/decca_sample.toml shows the format)"
                );
            };
            let mut six = curve(p, "six_oscillator", |c| {
                c.material = MaterialSection { param_file: Some(file.display().to_string()), ..model("six-oscillator") };
                c.transition.omega_ev = Some(OMEGA_P_EV);
            });
            six.config = six.config.inline_param_file(None)?;
            vec![
                curve(p, "plasma", |c| {
                    c.material = MaterialSection { omega_p_ev: Some(OMEGA_P_EV), ..model("plasma") };
                    c.transition.omega_ev = Some(OMEGA_P_EV);
                }),
                six,
            ]
        }
        "fig-thickness" => [None, Some(1e-1), Some(1e-2), Some(1e-4), Some(1e-6)]
            .iter()
            .map(|&h| {
                let n = h.map_or("h_over_z_inf".to_string(), |h| format!("h_over_z_{}", label(h)));
                curve(p, &n, |c| {
                    c.material = plasma_alpha(1e4);
                    c.geometry.h_over_z = h;
                })
            })
            .collect(),
        "fig-sapphire" | "fig-sapphire-dual" => {
            let coupling = if name == "fig-sapphire" { "magnetic" } else { "electric" };
            vec![
                curve(p, "sapphire_560khz", |c| {
                    c.material = model("sapphire");
                    c.transition.frequency_hz = Some(RUBIDIUM_HZ);
                    c.transition.coupling = Some(coupling.into());
                }),
                curve(p, "sapphire_9ev", |c| {
                    c.material = model("sapphire");
                    c.transition.omega_ev = Some(OMEGA_P_EV);
                    c.transition.coupling = Some(coupling.into());
                }),
                curve(p, "plasma_alpha_1", |c| {
                    c.material = plasma_alpha(1.0);
                    c.transition.coupling = Some(coupling.into());
                }),
            ]
        }
        "fig-sigma-mb" => [("clean", None), ("niobium", Some(13.61))]
            .iter()
            .map(|&(n, b)| {
                curve(p, n, |c| {
                    c.transition = Default::default();
                    c.material = MaterialSection { impurity: b, ..Default::default() };
                    c.sweep.quantity = Some("sigma".into());
                    c.sweep.variable = Some("q".into());
                    c.sweep.min = Some(1e-2);
                    c.sweep.max = Some(1e1);
                })
            })
            .collect(),
        "fig-dual" => {
            let mut curves = Vec::new();
            for (m, material) in [("plasma", plasma_alpha(1.0)), ("pc", model("perfect-conductor"))] {
                for coupling in ["magnetic", "electric"] {
                    curves.push(curve(p, &format!("{m}_{coupling}"), |c| {
                        c.material = material.clone();
                        c.transition.coupling = Some(coupling.into());
                    }));
                }
            }
            curves
        }
        other => bail!("unknown preset `{other}`; known presets: {}", PRESETS.join(", ")),
    })
}

/// Result of one preset curve.
#[derive(Debug, Clone)]
pub struct CurveOutput {
    pub path: PathBuf,
    pub table: Table,
}

/// Runs every curve of `name` and writes `out_dir/<name>/<curve>.csv`.
pub fn run_preset(
    name: &str,
    param_file: Option<&Path>,
    out_dir: &Path,
    quadrature: &QuadratureSection,
) -> Result<Vec<CurveOutput>> {
    let curves = preset(name, param_file)?;
    let dir = out_dir.join(name);
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut outputs = Vec::with_capacity(curves.len());
    for c in curves {
        let mut config = c.config;
        config.quadrature = quadrature.clone();
        let table = run_sweep(&config).with_context(|| format!("{name}: curve {}", c.name))?;
        let path = dir.join(format!("{}.csv", c.name));
        let file = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        table.write(std::io::BufWriter::new(file))?;
        outputs.push(CurveOutput { path, table });
    }
    Ok(outputs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_counts() {
        let counts: Vec<usize> = PRESETS
            .iter()
            .filter(|p| **p != "fig-decca")
            .map(|p| preset(p, None).unwrap().len())
            .collect();
        assert_eq!(counts, vec![6, 6, 5, 3, 2, 4, 3]);
    }

    #[test]
    fn decca_refuses_without_parameters() {
        let err = preset("fig-decca", None).unwrap_err().to_string();
        assert!(err.contains("--param-file"), "{err}");
    }

    #[test]
    fn unknown_preset() {
        assert!(preset("fig-nope", None).is_err());
    }
}
