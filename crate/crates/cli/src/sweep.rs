//! Grid evaluation of forces, shifts, rates and conductivities.

use anyhow::{anyhow, bail, Result};
use cpslab::forces::{force_point, moment_prefactor};
use cpslab::materials::{sigma_clean_reduced, sigma_impure_reduced};
use cpslab::shifts::{free_rate, ground_shift, spin_flip_rate};
use cpslab::{Coupling, PhysicalConstants, SlabGeometry, Transition, TransitionSet};
use rayon::prelude::*;

use crate::config::{RunConfig, SweepSection};
use crate::csvio::Table;

pub const GENERATOR: &str = concat!("cpslab ", env!("CARGO_PKG_VERSION"));

type PointEval = Box<dyn Fn(f64) -> Result<Vec<f64>> + Sync>;

/// Grid points of a sweep, strictly increasing.
pub fn grid(sweep: &SweepSection) -> Result<Vec<f64>> {
    let min = sweep.min.ok_or_else(|| anyhow!("missing required key `sweep.min` (flag --min)"))?;
    let max = sweep.max.ok_or_else(|| anyhow!("missing required key `sweep.max` (flag --max)"))?;
    if !(min < max) || !min.is_finite() || !max.is_finite() {
        bail!("sweep needs finite min < max, got [{min}, {max}]");
    }
    match sweep.scale.as_deref().unwrap_or("log") {
        "log" => {
            if !(min > 0.0) {
                bail!("a log sweep needs min > 0, got {min}");
            }
            let ppd = sweep.points_per_decade.unwrap_or(20);
            if ppd < 1 {
                bail!("points_per_decade must be at least 1");
            }
            let (lo, hi) = (min.log10(), max.log10());
            let steps = ((hi - lo) * f64::from(ppd) - 1e-9).ceil() as usize;
            let mut values: Vec<f64> = (0..steps).map(|i| 10f64.powf(lo + i as f64 / f64::from(ppd))).collect();
            values[0] = min;
            values.push(max);
            Ok(values)
        }
        "linear" => {
            let n = sweep.points.ok_or_else(|| anyhow!("missing required key `sweep.points` (flag --points)"))?;
            if n < 2 {
                bail!("a linear sweep needs at least 2 points");
            }
            let step = (max - min) / f64::from(n - 1);
            let mut values: Vec<f64> = (0..n).map(|i| min + f64::from(i) * step).collect();
            values[n as usize - 1] = max;
            Ok(values)
        }
        other => bail!("unknown sweep scale `{other}` (expected log or linear)"),
    }
}

fn tag(c: Coupling) -> &'static str {
    match c {
        Coupling::Magnetic => "M",
        Coupling::Electric => "E",
    }
}

/// Metadata lines: the configuration itself, minus the output section.
pub fn metadata(config: &RunConfig) -> Result<Vec<String>> {
    let mut c = config.clone();
    c.output = Default::default();
    c.meta.generator = Some(GENERATOR.to_string());
    Ok(c.to_toml_string()?.lines().map(str::to_string).collect())
}

fn transition_for(
    coupling: Coupling,
    omega_a: f64,
    weights: [f64; 3],
    config: &RunConfig,
    consts: &PhysicalConstants,
) -> Result<Transition> {
    Ok(match coupling {
        Coupling::Magnetic => Transition::magnetic(omega_a, weights, consts)?,
        Coupling::Electric => {
            let d = config
                .transition
                .dipole_cm
                .ok_or_else(|| anyhow!("missing required key `transition.dipole_cm` (flag --dipole-cm)"))?;
            Transition::electric(omega_a, weights, d)?
        }
    })
}

/// Evaluates `config.sweep.quantity` on the configured grid.
///
/// Points run in parallel; rows come back in grid order. Any failed point
/// fails the whole sweep with the offending grid values listed.
pub fn run_sweep(config: &RunConfig) -> Result<Table> {
    let consts = PhysicalConstants::default();
    let quad = config.quadrature_spec()?;
    let points = grid(&config.sweep)?;
    let quantity = config.sweep.quantity.as_deref().unwrap_or("force");
    let variable = config.sweep.variable.as_deref().unwrap_or(if quantity == "sigma" { "q" } else { "x" });

    let (columns, eval): (Vec<String>, PointEval) = match quantity {
        "sigma" => {
            if variable != "q" {
                bail!("conductivity sweeps run over q = Δ/ħω (sweep.variable = \"q\")");
            }
            let impurity = config.material.impurity;
            let cols = vec!["q".into(), "sigma1_over_sigman".into(), "sigma2_over_sigman".into()];
            let f = move |q: f64| -> Result<Vec<f64>> {
                let w = 1.0 / q;
                let s = match impurity {
                    None => sigma_clean_reduced(w, &quad)?,
                    Some(b) => sigma_impure_reduced(w, b, &quad)?,
                };
                Ok(vec![q, s.sigma1_over_sigman, s.sigma2_over_sigman])
            };
            (cols, Box::new(f))
        }
        "force" | "shift" | "rate" => {
            let omega_a = config.omega_a(&consts)?;
            let material = config.material(&consts)?;
            let couplings = config.couplings()?;
            let weights = config.weights();
            // distance and k_A z of a grid value
            let to_xz = {
                let variable = variable.to_string();
                move |v: f64| -> Result<(f64, Option<f64>)> {
                    match (variable.as_str(), omega_a) {
                        ("x", w) => Ok((v, w.map(|w| v * consts.c / w))),
                        ("z", Some(w)) => Ok((w * v / consts.c, Some(v))),
                        ("z", None) => Err(anyhow!("a sweep over z needs `transition.omega_ev`")),
                        (other, _) => Err(anyhow!("unknown sweep variable `{other}` (expected x or z)")),
                    }
                }
            };
            let mut cols = vec!["x".to_string()];
            if omega_a.is_some() {
                cols.push("z_m".into());
            }
            match quantity {
                "force" => {
                    let reduced = material.reduced(omega_a)?;
                    let dimensional: Vec<Option<f64>> = couplings
                        .iter()
                        .map(|c| match c {
                            _ if omega_a.is_none() => None,
                            Coupling::Magnetic => Some(consts.spin_moment()),
                            Coupling::Electric => config.transition.dipole_cm,
                        })
                        .collect();
                    for (c, d) in couplings.iter().zip(&dimensional) {
                        let t = tag(*c);
                        cols.extend([format!("ibar_parallel_{t}"), format!("ibar_perp_{t}"), format!("F_{t}")]);
                        if d.is_some() {
                            cols.push(format!("F_{t}_newton"));
                        }
                    }
                    let config = config.clone();
                    let f = move |v: f64| -> Result<Vec<f64>> {
                        let (x, z) = to_xz(v)?;
                        let ratio = config.thickness_ratio(z)?;
                        let mut row = vec![x];
                        row.extend(z);
                        for (c, moment) in couplings.iter().zip(&dimensional) {
                            let p = force_point(x, weights, &reduced, ratio, *c, &quad)?;
                            row.extend([p.ibar_parallel, p.ibar_perp, p.value]);
                            if let (Some(m), Some(z)) = (moment, z) {
                                row.push(moment_prefactor(z, *m, *c, &consts) * p.value);
                            }
                        }
                        Ok(row)
                    };
                    (cols, Box::new(f))
                }
                _ => {
                    let omega_a = omega_a.ok_or_else(|| anyhow!("missing required key `transition.omega_ev` (flag --omega-ev)"))?;
                    let physical = material.physical(Some(omega_a))?;
                    let transitions = couplings
                        .iter()
                        .map(|c| transition_for(*c, omega_a, weights, config, &consts))
                        .collect::<Result<Vec<_>>>()?;
                    for c in &couplings {
                        let t = tag(*c);
                        if quantity == "shift" {
                            cols.push(format!("delta_omega_{t}_rad_s"));
                        } else {
                            cols.extend([format!("gamma_{t}_rad_s"), format!("gamma_ratio_{t}")]);
                        }
                    }
                    let config = config.clone();
                    let shift = quantity == "shift";
                    let f = move |v: f64| -> Result<Vec<f64>> {
                        let (x, z) = to_xz(v)?;
                        let z = z.expect("omega_a is known");
                        let geom = SlabGeometry::new(z, config.thickness_ratio(Some(z))?.map(|r| r * z))?;
                        let mut row = vec![x, z];
                        for t in &transitions {
                            let set = TransitionSet::single(*t);
                            if shift {
                                row.push(ground_shift(&geom, &set, &physical, &consts, &quad)?.delta_omega);
                            } else {
                                let g = spin_flip_rate(&geom, &set, &physical, &consts, &quad)?;
                                row.extend([g, g / free_rate(t, &consts)]);
                            }
                        }
                        Ok(row)
                    };
                    (cols, Box::new(f))
                }
            }
        }
        other => bail!("unknown sweep quantity `{other}` (expected force, shift, rate or sigma)"),
    };

    let results: Vec<Result<Vec<f64>>> = points.par_iter().map(|&v| eval(v)).collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (v, r) in points.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => failures.push(format!("  {variable} = {v:e}: {e:#}")),
        }
    }
    if !failures.is_empty() {
        bail!("{} of {} grid points failed:\n{}", failures.len(), points.len(), failures.join("\n"));
    }
    Ok(Table { metadata: metadata(config)?, columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep(min: f64, max: f64, ppd: u32) -> SweepSection {
        SweepSection { min: Some(min), max: Some(max), points_per_decade: Some(ppd), ..Default::default() }
    }

    #[test]
    fn log_grid_row_count() {
        let g = grid(&sweep(1e-3, 1e2, 20)).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[100], 1e2);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn partial_decade_ends_at_max() {
        let g = grid(&sweep(1.0, 5.0, 10)).unwrap();
        assert_eq!(*g.last().unwrap(), 5.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn linear_grid() {
        let s = SweepSection { min: Some(0.0), max: Some(1.0), points: Some(5), scale: Some("linear".into()), ..Default::default() };
        assert_eq!(grid(&s).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn bad_grids_are_rejected() {
        assert!(grid(&sweep(1.0, 1.0, 10)).is_err());
        assert!(grid(&sweep(0.0, 1.0, 10)).is_err());
        assert!(grid(&sweep(1.0, 10.0, 0)).is_err());
    }
}
