//! Run configuration: a TOML file whose sections mirror the command-line flags.
//!
//! Energies carry an explicit `_ev` suffix. Every field is optional so that a
//! file and the flags can be layered; [`RunConfig::overlay`] lets the flags win.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use cpslab::materials::{Oscillator, Superconductor};
use cpslab::units::{to_angular_frequency, FrequencyUnit};
use cpslab::{Coupling, MaterialModel, PhysicalConstants, QuadratureSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "MetaSection::is_empty")]
    pub meta: MetaSection,
    pub material: MaterialSection,
    pub transition: TransitionSection,
    pub geometry: GeometrySection,
    pub sweep: SweepSection,
    pub quadrature: QuadratureSection,
    #[serde(skip_serializing_if = "OutputSection::is_empty")]
    pub output: OutputSection,
}

/// Free-form labels carried into CSV metadata; never used in computations.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetaSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
}

impl MetaSection {
    fn is_empty(&self) -> bool {
        self.generator.is_none() && self.preset.is_none() && self.curve.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialSection {
    /// vacuum | perfect-conductor | plasma | drude | gold | six-oscillator |
    /// two-plateau | sapphire | superconductor
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_p_ev: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_ev: Option<f64>,
    /// ω_p/ω_A, instead of `omega_p_ev`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// ν/ω_A, instead of `nu_ev`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_bar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_p1_ev: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_p2_ev: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_1_ev: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_2_ev: Option<f64>,
    /// Six-oscillator table, rows of `[f_ev2, omega_ev, g_ev]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oscillators: Option<Vec<[f64; 3]>>,
    /// File holding `omega_p_ev` and `oscillators`; read once and inlined.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_ev: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_sp_ev: Option<f64>,
    /// ħ/(τΔ); absent means the clean limit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub impurity: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransitionSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_ev: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frequency_hz: Option<f64>,
    /// `[w_x, w_y, w_z]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<[f64; 3]>,
    /// magnetic | electric | both
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling: Option<String>,
    /// |d| in C·m, for dimensional electric results.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dipole_cm: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_over_z: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_m: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    /// force | shift | rate | sigma
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantity: Option<String>,
    /// x | z | q
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variable: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points_per_decade: Option<u32>,
    /// Number of points of a linear grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<u32>,
    /// log | linear
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_subdivisions: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_split: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// Only `csv` is supported.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
}

impl OutputSection {
    fn is_empty(&self) -> bool {
        self.path.is_none() && self.format.is_none()
    }
}

/// Contents of a six-oscillator parameter file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct OscillatorFile {
    omega_p_ev: f64,
    oscillators: Vec<[f64; 3]>,
}

macro_rules! overlay_fields {
    ($dst:expr, $src:expr, $($f:ident),+) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )+
    };
}

fn missing(key: &str, flag: &str) -> anyhow::Error {
    anyhow!("missing required key `{key}` (flag --{flag})")
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).context("invalid configuration")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml_str(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).context("serialising configuration")
    }

    /// Every value set in `top` replaces the one in `self`.
    pub fn overlay(mut self, top: &RunConfig) -> Self {
        overlay_fields!(self.meta, top.meta, generator, preset, curve);
        overlay_fields!(
            self.material,
            top.material,
            model,
            omega_p_ev,
            nu_ev,
            alpha,
            nu_bar,
            omega_p1_ev,
            omega_p2_ev,
            omega_1_ev,
            omega_2_ev,
            oscillators,
            param_file,
            delta_ev,
            omega_sp_ev,
            impurity
        );
        overlay_fields!(self.transition, top.transition, omega_ev, frequency_hz, weights, coupling, dipole_cm);
        overlay_fields!(self.geometry, top.geometry, x, z_m, h_over_z, h_m);
        overlay_fields!(self.sweep, top.sweep, quantity, variable, min, max, points_per_decade, points, scale);
        overlay_fields!(self.quadrature, top.quadrature, rel_tol, abs_tol, max_subdivisions, epsilon_split);
        overlay_fields!(self.output, top.output, path, format);
        self
    }

    /// Reads `material.param_file` into `omega_p_ev`/`oscillators` so the
    /// configuration is self-contained.
    pub fn inline_param_file(mut self, base: Option<&Path>) -> Result<Self> {
        if let Some(file) = self.material.param_file.take() {
            let path = match base {
                Some(dir) if Path::new(&file).is_relative() => dir.join(&file),
                _ => Path::new(&file).to_path_buf(),
            };
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading oscillator parameter file {}", path.display()))?;
            let table: OscillatorFile =
                toml::from_str(&text).with_context(|| format!("parsing oscillator parameter file {}", path.display()))?;
            self.material.omega_p_ev = Some(table.omega_p_ev);
            self.material.oscillators = Some(table.oscillators);
        }
        Ok(self)
    }

    pub fn quadrature_spec(&self) -> Result<QuadratureSpec> {
        let mut q = QuadratureSpec::default();
        let s = &self.quadrature;
        if let Some(v) = s.rel_tol {
            q.rel_tol = v;
        }
        if let Some(v) = s.abs_tol {
            q.abs_tol = v;
        }
        if let Some(v) = s.max_subdivisions {
            q.max_subdivisions = v as usize;
        }
        if let Some(v) = s.epsilon_split {
            q.epsilon_split = v;
        }
        q.validate()?;
        Ok(q)
    }

    /// ω_A in rad/s, if the transition frequency was given.
    pub fn omega_a(&self, consts: &PhysicalConstants) -> Result<Option<f64>> {
        let t = &self.transition;
        match (t.omega_ev, t.frequency_hz) {
            (Some(_), Some(_)) => bail!("give only one of `transition.omega_ev` and `transition.frequency_hz`"),
            (Some(e), None) => Ok(Some(to_angular_frequency(e, FrequencyUnit::ElectronVolt, consts)?)),
            (None, Some(f)) => Ok(Some(to_angular_frequency(f, FrequencyUnit::Hertz, consts)?)),
            (None, None) => Ok(None),
        }
    }

    pub fn require_omega_a(&self, consts: &PhysicalConstants) -> Result<f64> {
        self.omega_a(consts)?.ok_or_else(|| missing("transition.omega_ev", "omega-ev"))
    }

    pub fn weights(&self) -> [f64; 3] {
        self.transition.weights.unwrap_or([0.25; 3])
    }

    pub fn couplings(&self) -> Result<Vec<Coupling>> {
        match self.transition.coupling.as_deref().unwrap_or("magnetic") {
            "magnetic" => Ok(vec![Coupling::Magnetic]),
            "electric" => Ok(vec![Coupling::Electric]),
            "both" => Ok(vec![Coupling::Magnetic, Coupling::Electric]),
            other => bail!("unknown coupling `{other}` (expected magnetic, electric or both)"),
        }
    }

    /// Thickness ratio `h/z` at distance `z` (m, only needed with `h_m`).
    pub fn thickness_ratio(&self, z: Option<f64>) -> Result<Option<f64>> {
        match (self.geometry.h_over_z, self.geometry.h_m) {
            (Some(_), Some(_)) => bail!("give only one of `geometry.h_over_z` and `geometry.h_m`"),
            (Some(r), None) => Ok(Some(r)),
            (None, Some(h)) => {
                let z = z.ok_or_else(|| anyhow!("`geometry.h_m` needs physical distances; set `transition.omega_ev`"))?;
                Ok(Some(h / z))
            }
            (None, None) => Ok(None),
        }
    }

    /// The material, either with SI frequencies or already reduced by ω_A.
    pub fn material(&self, consts: &PhysicalConstants) -> Result<Material> {
        let m = &self.material;
        let ev = |v: f64| to_angular_frequency(v, FrequencyUnit::ElectronVolt, consts).map_err(anyhow::Error::from);
        let need = |v: Option<f64>, key: &str, flag: &str| v.ok_or_else(|| missing(&format!("material.{key}"), flag));
        let model = m.model.as_deref().ok_or_else(|| missing("material.model", "model"))?;
        let material = match model {
            "vacuum" => Material::Physical(MaterialModel::Vacuum),
            "perfect-conductor" => Material::Physical(MaterialModel::PerfectConductor),
            "plasma" => match (m.alpha, m.omega_p_ev) {
                (Some(a), None) => Material::Reduced(MaterialModel::Plasma { omega_p: a }),
                (None, Some(e)) => Material::Physical(MaterialModel::Plasma { omega_p: ev(e)? }),
                (Some(_), Some(_)) => bail!("give only one of `material.alpha` and `material.omega_p_ev`"),
                (None, None) => return Err(missing("material.omega_p_ev", "omega-p-ev")),
            },
            "drude" => match (m.alpha, m.omega_p_ev) {
                (Some(a), None) => {
                    Material::Reduced(MaterialModel::Drude { omega_p: a, nu: need(m.nu_bar, "nu_bar", "nu-bar")? })
                }
                (None, Some(e)) => {
                    Material::Physical(MaterialModel::Drude { omega_p: ev(e)?, nu: ev_or_zero(need(m.nu_ev, "nu_ev", "nu-ev")?, consts)? })
                }
                (Some(_), Some(_)) => bail!("give only one of `material.alpha` and `material.omega_p_ev`"),
                (None, None) => return Err(missing("material.omega_p_ev", "omega-p-ev")),
            },
            "gold" => Material::Physical(MaterialModel::gold_drude(consts)),
            "sapphire" => Material::Physical(MaterialModel::sapphire(consts)),
            "two-plateau" => Material::Physical(MaterialModel::TwoPlateau {
                omega_p1: ev(need(m.omega_p1_ev, "omega_p1_ev", "omega-p1-ev")?)?,
                omega_p2: ev(need(m.omega_p2_ev, "omega_p2_ev", "omega-p2-ev")?)?,
                omega_1: ev(need(m.omega_1_ev, "omega_1_ev", "omega-1-ev")?)?,
                omega_2: ev(need(m.omega_2_ev, "omega_2_ev", "omega-2-ev")?)?,
            }),
            "six-oscillator" => {
                let table = m.oscillators.as_ref().ok_or_else(|| {
                    anyhow!(
                        "the six-oscillator model needs its (f_j, omega_j, g_j) table: set `material.param_file` \
                         (flag --param-file) or `material.oscillators`"
                    )
                })?;
                let oscillators = table
                    .iter()
                    .map(|&[f, w, g]| -> Result<Oscillator> {
                        let unit = ev(1.0)?;
                        Ok(Oscillator { strength: f * unit * unit, omega: w * unit, damping: g * unit })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Material::Physical(MaterialModel::SixOscillator {
                    omega_p: ev(need(m.omega_p_ev, "omega_p_ev", "omega-p-ev")?)?,
                    oscillators,
                })
            }
            "superconductor" => Material::Physical(MaterialModel::SuperconductorMB(Superconductor {
                gap: ev(need(m.delta_ev, "delta_ev", "delta-ev")?)?,
                omega_sp: ev(need(m.omega_sp_ev, "omega_sp_ev", "omega-sp-ev")?)?,
                impurity: m.impurity,
            })),
            other => bail!(
                "unknown material model `{other}` (expected vacuum, perfect-conductor, plasma, drude, gold, \
                 six-oscillator, two-plateau, sapphire or superconductor)"
            ),
        };
        match &material {
            Material::Physical(x) | Material::Reduced(x) => x.validate()?,
        }
        Ok(material)
    }
}

fn ev_or_zero(v: f64, consts: &PhysicalConstants) -> Result<f64> {
    if v == 0.0 {
        Ok(0.0)
    } else {
        Ok(to_angular_frequency(v, FrequencyUnit::ElectronVolt, consts)?)
    }
}

/// A material as configured: frequencies in rad/s, or already in units of ω_A.
#[derive(Debug, Clone, PartialEq)]
pub enum Material {
    Physical(MaterialModel),
    Reduced(MaterialModel),
}

impl Material {
    fn frequency_free(m: &MaterialModel) -> bool {
        matches!(m, MaterialModel::Vacuum | MaterialModel::PerfectConductor)
    }

    /// Model in units of ω_A.
    pub fn reduced(&self, omega_a: Option<f64>) -> Result<MaterialModel> {
        match self {
            Material::Reduced(m) => Ok(m.clone()),
            Material::Physical(m) if Self::frequency_free(m) => Ok(m.clone()),
            Material::Physical(m) => {
                let w = omega_a.ok_or_else(|| missing("transition.omega_ev", "omega-ev"))?;
                Ok(m.in_units_of(w))
            }
        }
    }

    /// Model with frequencies in rad/s.
    pub fn physical(&self, omega_a: Option<f64>) -> Result<MaterialModel> {
        match self {
            Material::Physical(m) => Ok(m.clone()),
            Material::Reduced(m) if Self::frequency_free(m) => Ok(m.clone()),
            Material::Reduced(m) => {
                let w = omega_a.ok_or_else(|| missing("transition.omega_ev", "omega-ev"))?;
                Ok(m.in_units_of(1.0 / w))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_prefers_top() {
        let base = RunConfig::from_toml_str("[material]\nmodel = \"plasma\"\nalpha = 1.0\n").unwrap();
        let mut top = RunConfig::default();
        top.material.alpha = Some(10.0);
        let merged = base.overlay(&top);
        assert_eq!(merged.material.model.as_deref(), Some("plasma"));
        assert_eq!(merged.material.alpha, Some(10.0));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml_str("[material]\nmodle = \"plasma\"\n").is_err());
    }

    #[test]
    fn missing_key_is_named() {
        let c = RunConfig::from_toml_str("[material]\nmodel = \"plasma\"\n").unwrap();
        let err = c.material(&PhysicalConstants::default()).unwrap_err().to_string();
        assert!(err.contains("material.omega_p_ev"), "{err}");
    }

    #[test]
    fn toml_round_trip() {
        let mut c = RunConfig::default();
        c.material.model = Some("six-oscillator".into());
        c.material.oscillators = Some(vec![[1.0, 2.0, 3.0]]);
        c.transition.weights = Some([0.25; 3]);
        c.sweep.min = Some(1e-3);
        let text = c.to_toml_string().unwrap();
        assert_eq!(RunConfig::from_toml_str(&text).unwrap(), c);
    }
}
