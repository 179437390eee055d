//! Experiment drivers behind the `vslab` binary.
//!
//! Every experiment writes versioned CSV tables into the output directory,
//! echoes its effective configuration there as `config.toml`, and can
//! render SVG charts from the CSV it just wrote.

pub mod args;
pub mod config;
pub mod csvout;
pub mod experiments;
pub mod svg;

pub use config::{Algo, BlackBoxChoice, Experiment, ExperimentConfig, GammaLb, IntRange};
pub use experiments::{run, Outcome};

use thiserror::Error;

/// Failures of a CLI run, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("cannot write output: {0}")]
    Output(String),
    #[error("{0}")]
    Budget(String),
    #[error(transparent)]
    Core(vslab_core::Error),
}

impl From<vslab_core::Error> for CliError {
    fn from(e: vslab_core::Error) -> Self {
        use vslab_core::Error as E;
        match e {
            E::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            E::DimensionMismatch { .. }
            | E::InvalidArgument(_)
            | E::ZeroVector
            | E::Inseparable { .. }
            | E::RejectionBudget { .. }
            | E::Parse { .. }
            | E::Io(_)
            | E::ResourceGuard(_)
            | E::EmptyGrid(_)
            | E::Disconnected => CliError::Input(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Output(_) | CliError::Core(_) => EXIT_FAILURE,
        }
    }
}
