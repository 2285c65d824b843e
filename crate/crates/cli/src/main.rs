use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cpslab_cli::config::{
    GeometrySection, MaterialSection, QuadratureSection, RunConfig, SweepSection, TransitionSection,
};
use cpslab_cli::{presets, query, sweep};

/// Casimir-Polder shifts, rates and forces near a conducting slab.
#[derive(Debug, Parser)]
#[command(name = "cpslab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// ε(iω) of a material at an imaginary frequency.
    Epsilon {
        /// ħω in eV.
        #[arg(long)]
        at_ev: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Mattis-Bardeen σ(ω)/σ_n at q = Δ/ħω.
    Sigma {
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Ground-state frequency shift at one distance.
    Shift(Common),
    /// Spin-flip rate at one distance.
    Rate(Common),
    /// Force at one distance, with its asymptotic regime.
    Force(Common),
    /// Evaluate a quantity on a grid and write CSV.
    Sweep(Common),
    /// Regenerate the data behind a figure.
    Figure {
        /// One of the known presets, or `all`.
        preset: String,
        #[arg(long, default_value = "figures")]
        output_dir: PathBuf,
        /// Oscillator table for the six-oscillator gold model.
        #[arg(long)]
        param_file: Option<PathBuf>,
        #[command(flatten)]
        quadrature: QuadratureFlags,
    },
}

#[derive(Debug, Clone, Args)]
struct QuadratureFlags {
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    max_subdivisions: Option<u32>,
    #[arg(long)]
    epsilon_split: Option<f64>,
}

impl QuadratureFlags {
    fn section(&self) -> QuadratureSection {
        QuadratureSection {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
            epsilon_split: self.epsilon_split,
        }
    }
}

/// Flags mirroring the configuration keys; they override `--config`.
#[derive(Debug, Clone, Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long)]
    output: Option<PathBuf>,

    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    omega_p_ev: Option<f64>,
    #[arg(long)]
    nu_ev: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    nu_bar: Option<f64>,
    #[arg(long)]
    omega_p1_ev: Option<f64>,
    #[arg(long)]
    omega_p2_ev: Option<f64>,
    #[arg(long)]
    omega_1_ev: Option<f64>,
    #[arg(long)]
    omega_2_ev: Option<f64>,
    #[arg(long)]
    param_file: Option<PathBuf>,
    #[arg(long)]
    delta_ev: Option<f64>,
    #[arg(long)]
    omega_sp_ev: Option<f64>,
    #[arg(long)]
    impurity: Option<f64>,

    #[arg(long)]
    omega_ev: Option<f64>,
    #[arg(long)]
    frequency_hz: Option<f64>,
    /// w_x,w_y,w_z
    #[arg(long, value_delimiter = ',', num_args = 3)]
    weights: Option<Vec<f64>>,
    /// magnetic | electric | both
    #[arg(long)]
    coupling: Option<String>,
    #[arg(long)]
    dipole_cm: Option<f64>,

    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    z_m: Option<f64>,
    #[arg(long)]
    h_over_z: Option<f64>,
    #[arg(long)]
    h_m: Option<f64>,

    /// force | shift | rate | sigma
    #[arg(long)]
    quantity: Option<String>,
    /// x | z | q
    #[arg(long)]
    variable: Option<String>,
    #[arg(long)]
    min: Option<f64>,
    #[arg(long)]
    max: Option<f64>,
    #[arg(long)]
    points_per_decade: Option<u32>,
    #[arg(long)]
    points: Option<u32>,
    /// log | linear
    #[arg(long)]
    scale: Option<String>,

    #[command(flatten)]
    quadrature: QuadratureFlags,
}

impl Common {
    fn flags(&self) -> Result<RunConfig> {
        let weights = match &self.weights {
            None => None,
            Some(w) if w.len() == 3 => Some([w[0], w[1], w[2]]),
            Some(w) => bail!("--weights takes three values, got {}", w.len()),
        };
        Ok(RunConfig {
            material: MaterialSection {
                model: self.model.clone(),
                omega_p_ev: self.omega_p_ev,
                nu_ev: self.nu_ev,
                alpha: self.alpha,
                nu_bar: self.nu_bar,
                omega_p1_ev: self.omega_p1_ev,
                omega_p2_ev: self.omega_p2_ev,
                omega_1_ev: self.omega_1_ev,
                omega_2_ev: self.omega_2_ev,
                oscillators: None,
                param_file: self.param_file.as_ref().map(|p| p.display().to_string()),
                delta_ev: self.delta_ev,
                omega_sp_ev: self.omega_sp_ev,
                impurity: self.impurity,
            },
            transition: TransitionSection {
                omega_ev: self.omega_ev,
                frequency_hz: self.frequency_hz,
                weights,
                coupling: self.coupling.clone(),
                dipole_cm: self.dipole_cm,
            },
            geometry: GeometrySection { x: self.x, z_m: self.z_m, h_over_z: self.h_over_z, h_m: self.h_m },
            sweep: SweepSection {
                quantity: self.quantity.clone(),
                variable: self.variable.clone(),
                min: self.min,
                max: self.max,
                points_per_decade: self.points_per_decade,
                points: self.points,
                scale: self.scale.clone(),
            },
            quadrature: self.quadrature.section(),
            ..Default::default()
        })
    }

    /// The `--config` file overlaid with the flags, parameter file inlined.
    fn resolve(&self) -> Result<RunConfig> {
        let flags = self.flags()?;
        let (base, dir) = match &self.config {
            Some(path) => (RunConfig::load(path)?, path.parent().map(Path::to_path_buf)),
            None => (RunConfig::default(), None),
        };
        // a param_file from the file is relative to the file, one from the flags to the cwd
        let base = base.inline_param_file(dir.as_deref())?;
        base.overlay(&flags).inline_param_file(None)
    }

    fn output_path(&self, config: &RunConfig) -> Option<PathBuf> {
        self.output.clone().or_else(|| config.output.path.as_ref().map(PathBuf::from))
    }
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Epsilon { at_ev, common } => {
            let c = common.resolve()?;
            emit(&query::render(&query::epsilon(&c, at_ev)?), common.output_path(&c).as_deref())
        }
        Command::Sigma { q, common } => {
            let c = common.resolve()?;
            emit(&query::render(&query::sigma(&c, q)?), common.output_path(&c).as_deref())
        }
        Command::Shift(common) => {
            let c = common.resolve()?;
            emit(&query::render(&query::shift_or_rate(&c, false)?), common.output_path(&c).as_deref())
        }
        Command::Rate(common) => {
            let c = common.resolve()?;
            emit(&query::render(&query::shift_or_rate(&c, true)?), common.output_path(&c).as_deref())
        }
        Command::Force(common) => {
            let c = common.resolve()?;
            emit(&query::render(&query::force(&c)?), common.output_path(&c).as_deref())
        }
        Command::Sweep(common) => {
            let c = common.resolve()?;
            if let Some(f) = c.output.format.as_deref() {
                if f != "csv" {
                    bail!("unsupported output format `{f}` (only csv)");
                }
            }
            let table = sweep::run_sweep(&c)?;
            emit(&table.render()?, common.output_path(&c).as_deref())
        }
        Command::Figure { preset, output_dir, param_file, quadrature } => {
            let names: Vec<&str> = if preset == "all" { presets::PRESETS.to_vec() } else { vec![preset.as_str()] };
            for name in names {
                let outputs = presets::run_preset(name, param_file.as_deref(), &output_dir, &quadrature.section())?;
                for o in outputs {
                    eprintln!("wrote {}", o.path.display());
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
