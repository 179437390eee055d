//! Command-line flags and their merge into an [`ExperimentConfig`].

use crate::config::{Algo, BlackBoxChoice, Experiment, ExperimentConfig, GammaLb, IntRange};
use crate::CliError;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "vslab", version, about = "Version-space sampling and quantum perceptron experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Margin and version-space probability of the hard dataset per dimension.
    Fig1(Flags),
    /// Perceptron query counts with classical and quantum mistake finders.
    Scaling(Flags),
    /// Run one solver on one dataset.
    Solve(Flags),
    /// Trace the quantum-walk learner on a two-dimensional dataset.
    Walkdemo(Flags),
    /// Re-render the SVG chart of a CSV written by `fig1`, `scaling` or `walkdemo`.
    Render {
        csv: PathBuf,
    },
}

/// Flags shared by every experiment. Unset flags keep the config value.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML file with config keys (kebab-case).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u32>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write SVG charts.
    #[arg(long)]
    pub svg: bool,
    /// `mohri`, `random` or a CSV path.
    #[arg(long)]
    pub dataset: Option<String>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long, value_enum)]
    pub algo: Option<Algo>,
    /// `auto` or a number.
    #[arg(long)]
    pub gamma_lb: Option<GammaLb>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub walk_steps: Option<usize>,
    #[arg(long)]
    pub m_points: Option<usize>,
    /// Inclusive range such as `2..6`.
    #[arg(long)]
    pub d_range: Option<IntRange>,
    /// Inclusive range; powers of two inside it are used.
    #[arg(long)]
    pub n_range: Option<IntRange>,
    /// Monte-Carlo samples per dimension.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub max_samples: Option<u64>,
    #[arg(long, value_enum)]
    pub black_box: Option<BlackBoxChoice>,
    #[arg(long)]
    pub grid_spacing: Option<f64>,
    #[arg(long)]
    pub ancilla_bits: Option<u32>,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long)]
    pub laziness: Option<f64>,
    /// Search for mistakes of the origin instead of the current centroid.
    #[arg(long)]
    pub literal_z0: bool,
}

impl Flags {
    /// Loads `--config` (or defaults) and applies every flag that was given.
    pub fn resolve(&self, experiment: Experiment) -> Result<ExperimentConfig, CliError> {
        let (mut c, file_sets_d) = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", p.display())))?;
                let c = ExperimentConfig::from_toml(&text)?;
                let sets_d = text.parse::<toml::Table>().is_ok_and(|t| t.contains_key("d"));
                (c, sets_d)
            }
            None => (ExperimentConfig::default(), false),
        };
        c.experiment = experiment;
        if experiment == Experiment::Walkdemo && !file_sets_d {
            c.d = 2;
        }
        macro_rules! set {
            ($($flag:ident => $field:ident),* $(,)?) => {
                $(if let Some(v) = self.$flag.clone() { c.$field = v; })*
            };
        }
        set!(seed => seed, trials => trials, out => out_dir, dataset => dataset, d => d, n => n,
             margin => margin, algo => algo, gamma_lb => gamma_lb, epsilon => epsilon,
             d_range => d_range, n_range => n_range, samples => samples, max_samples => max_samples,
             black_box => black_box, grid_spacing => grid_spacing, ancilla_bits => ancilla_bits,
             depth => depth, laziness => laziness);
        if self.walk_steps.is_some() {
            c.walk_steps = self.walk_steps;
        }
        if self.m_points.is_some() {
            c.m_points = self.m_points;
        }
        c.emit_svg |= self.svg;
        c.literal_z0 |= self.literal_z0;
        Ok(c)
    }
}
