//! Experiment configuration: TOML file values overridden by flags.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    #[default]
    Fig1,
    Scaling,
    Solve,
    Walkdemo,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::Fig1 => "fig1",
            Experiment::Scaling => "scaling",
            Experiment::Solve => "solve",
            Experiment::Walkdemo => "walkdemo",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    #[default]
    Perceptron,
    PerceptronQ,
    VsMc,
    VsMcGrover,
    Ellipsoid,
    CuttingPlane,
    Qwalk,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Perceptron => "perceptron",
            Algo::PerceptronQ => "perceptron-q",
            Algo::VsMc => "vs-mc",
            Algo::VsMcGrover => "vs-mc-grover",
            Algo::Ellipsoid => "ellipsoid",
            Algo::CuttingPlane => "cutting-plane",
            Algo::Qwalk => "qwalk",
        })
    }
}

/// Mistake finder used by the ellipsoid, cutting-plane and quantum-walk
/// solvers. The perceptron variants fix their own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BlackBoxChoice {
    Classical,
    #[default]
    Qsearch,
}

/// Inclusive integer range written `a..b` (or a single value `a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct IntRange {
    pub start: usize,
    pub end: usize,
}

impl IntRange {
    pub fn new(start: usize, end: usize) -> Result<Self, String> {
        if start > end {
            return Err(format!("range {start}..{end} is empty"));
        }
        Ok(Self { start, end })
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }

    /// Powers of two inside the range.
    pub fn powers_of_two(&self) -> Vec<usize> {
        (0..usize::BITS).map(|k| 1usize << k).filter(|&n| n >= self.start && n <= self.end).collect()
    }
}

impl FromStr for IntRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad range bound {t:?}: {e}"));
        match s.split_once("..") {
            Some((a, b)) => Self::new(parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                Self::new(v, v)
            }
        }
    }
}

impl TryFrom<String> for IntRange {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<IntRange> for String {
    fn from(r: IntRange) -> String {
        r.to_string()
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// `auto` takes the dataset's computed margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(try_from = "String", into = "String")]
pub enum GammaLb {
    #[default]
    Auto,
    Value(f64),
}

impl FromStr for GammaLb {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(GammaLb::Auto);
        }
        s.parse::<f64>().map(GammaLb::Value).map_err(|e| format!("gamma-lb must be `auto` or a number: {e}"))
    }
}

impl TryFrom<String> for GammaLb {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<GammaLb> for String {
    fn from(g: GammaLb) -> String {
        match g {
            GammaLb::Auto => "auto".into(),
            GammaLb::Value(v) => v.to_string(),
        }
    }
}

/// Everything an experiment run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub d_range: IntRange,
    pub n_range: IntRange,
    pub trials: u32,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub emit_svg: bool,
    /// Monte-Carlo samples per dimension in `fig1`.
    pub samples: u64,
    /// `mohri`, `random` or a CSV path.
    pub dataset: String,
    pub d: usize,
    pub n: usize,
    pub margin: f64,
    pub algo: Algo,
    pub gamma_lb: GammaLb,
    pub epsilon: f64,
    pub black_box: BlackBoxChoice,
    pub walk_steps: Option<usize>,
    pub m_points: Option<usize>,
    /// Largest sample count the version-space sampler may request.
    pub max_samples: u64,
    pub grid_spacing: f64,
    pub ancilla_bits: u32,
    pub depth: u32,
    pub laziness: f64,
    pub literal_z0: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Fig1,
            d_range: IntRange { start: 2, end: 12 },
            n_range: IntRange { start: 16, end: 16384 },
            trials: 100,
            seed: 0,
            out_dir: PathBuf::from("out"),
            emit_svg: false,
            samples: 1_000_000,
            dataset: "mohri".into(),
            d: 3,
            n: 100,
            margin: 0.2,
            algo: Algo::Perceptron,
            gamma_lb: GammaLb::Auto,
            epsilon: 0.1,
            black_box: BlackBoxChoice::Qsearch,
            walk_steps: None,
            m_points: None,
            max_samples: 10_000_000,
            grid_spacing: 0.1,
            ancilla_bits: 8,
            depth: 2,
            laziness: 0.5,
            literal_z0: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(CliError::Input("trials must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(CliError::Input("samples must be at least 1".into()));
        }
        if self.experiment == Experiment::Fig1 && (self.d_range.start < 2 || self.d_range.end > 12) {
            return Err(CliError::Input(format!("fig1 needs D within 2..12, got {}", self.d_range)));
        }
        if self.experiment == Experiment::Scaling && self.n_range.powers_of_two().is_empty() {
            return Err(CliError::Input(format!("n-range {} contains no power of two", self.n_range)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_toml() {
        let mut c = ExperimentConfig::default();
        c.gamma_lb = GammaLb::Value(0.25);
        c.walk_steps = Some(40);
        c.algo = Algo::VsMcGrover;
        let back = ExperimentConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn partial_files_keep_defaults() {
        let c = ExperimentConfig::from_toml("experiment = \"scaling\"\nd-range = \"3..5\"\ngamma-lb = \"auto\"\n").unwrap();
        assert_eq!(c.experiment, Experiment::Scaling);
        assert_eq!(c.d_range, IntRange { start: 3, end: 5 });
        assert_eq!(c.trials, 100);
        assert!(ExperimentConfig::from_toml("bogus = 1").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!("4".parse::<IntRange>().unwrap(), IntRange { start: 4, end: 4 });
        assert!("5..2".parse::<IntRange>().is_err());
        assert_eq!("16..100".parse::<IntRange>().unwrap().powers_of_two(), vec![16, 32, 64]);
        assert_eq!("2..=3".parse::<IntRange>().unwrap(), IntRange { start: 2, end: 3 });
    }
}
