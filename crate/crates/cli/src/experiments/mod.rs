//! The four experiments and their chart renderers.

mod fig1;
mod scaling;
mod solve;
mod walkdemo;

pub use fig1::{fig1_experiment, render_fig1};
pub use scaling::{fit_slope, render_scaling, scaling_experiment};
pub use solve::{build_dataset, solve_command, SolveRow};
pub use walkdemo::{render_walkdemo, walkdemo_command};

use crate::config::{Experiment, ExperimentConfig};
use crate::csvout::Table;
use crate::CliError;
use std::path::{Path, PathBuf};

/// What a finished experiment reports back to the binary.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// False only for solver runs that did not reach the version space.
    pub converged: bool,
    pub files: Vec<PathBuf>,
    /// Human-readable lines for stdout.
    pub summary: Vec<String>,
}

/// Runs `cfg.experiment` after validating the config and echoing it.
pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| CliError::Output(format!("{}: {e}", cfg.out_dir.display())))?;
    let echo = cfg.out_dir.join("config.toml");
    std::fs::write(&echo, cfg.to_toml()).map_err(|e| CliError::Output(format!("{}: {e}", echo.display())))?;
    let mut out = match cfg.experiment {
        Experiment::Fig1 => fig1_experiment(cfg)?,
        Experiment::Scaling => scaling_experiment(cfg)?,
        Experiment::Solve => solve_command(cfg)?,
        Experiment::Walkdemo => walkdemo_command(cfg)?,
    };
    out.files.insert(0, echo);
    Ok(out)
}

/// Writes `table` as `<out>/<name>.csv` and, if asked, the chart rendered
/// from the file just written as `<out>/<name>.svg`.
pub(crate) fn emit(
    cfg: &ExperimentConfig,
    name: &str,
    table: &Table,
    render: Option<fn(&Table) -> Result<String, CliError>>,
    files: &mut Vec<PathBuf>,
) -> Result<(), CliError> {
    let csv = cfg.out_dir.join(format!("{name}.csv"));
    table.write(&csv)?;
    files.push(csv.clone());
    if let (true, Some(render)) = (cfg.emit_svg, render) {
        files.push(render_file(&csv, render)?);
    }
    Ok(())
}

/// Renders the chart for a CSV file next to it, replacing the extension.
pub fn render_file(csv: &Path, render: fn(&Table) -> Result<String, CliError>) -> Result<PathBuf, CliError> {
    let svg = csv.with_extension("svg");
    let text = render(&Table::read(csv)?)?;
    std::fs::write(&svg, text).map_err(|e| CliError::Output(format!("{}: {e}", svg.display())))?;
    Ok(svg)
}
