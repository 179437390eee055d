use super::{emit, Outcome};
use crate::config::{Algo, BlackBoxChoice, ExperimentConfig, GammaLb};
use crate::csvout::{num, Table};
use crate::CliError;
use std::path::PathBuf;
use std::time::Instant;
use vslab_core::datasets::{DatasetKind, DatasetSpec};
use vslab_core::geometry::{in_version_space, Dataset};
use vslab_core::qwalk::{algorithm3_run, Algorithm3Params};
use vslab_core::solvers::{
    cutting_plane_solve, ellipsoid_solve, online_perceptron, version_space_mc_perceptron, BlackBox,
    CuttingPlaneParams, SolveReport, VsMcMode, VsMcOptions,
};

const COLUMNS: [&str; 17] = [
    "algo",
    "dataset",
    "d",
    "n",
    "gamma_lb",
    "converged",
    "in_version_space",
    "rounds",
    "updates",
    "classical_queries",
    "quantum_queries",
    "membership_queries",
    "walk_applications",
    "arithmetic_ops",
    "verification_queries",
    "seed",
    "solution",
];

/// One solver run, flattened.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveRow {
    pub algo: Algo,
    pub dataset: String,
    pub gamma_lb: f64,
    pub data_dim: usize,
    pub data_size: usize,
    pub in_version_space: bool,
    pub report: SolveReport,
}

/// `mohri`, `random` or a CSV path, sized by `d`, `n` and `margin`.
pub fn build_dataset(cfg: &ExperimentConfig) -> Result<Dataset, CliError> {
    let kind = match cfg.dataset.as_str() {
        "mohri" => DatasetKind::Mohri,
        "random" => DatasetKind::RandomMargin,
        path => DatasetKind::File(PathBuf::from(path)),
    };
    let spec = DatasetSpec {
        kind,
        dim: cfg.d,
        size: cfg.n,
        target_margin: Some(cfg.margin),
        seed: Some(cfg.seed),
        normalize: false,
    };
    Ok(spec.build()?)
}

fn black_box(c: BlackBoxChoice) -> BlackBox {
    match c {
        BlackBoxChoice::Classical => BlackBox::UniformClassical,
        BlackBoxChoice::Qsearch => BlackBox::Qsearch,
    }
}

fn run_solver(cfg: &ExperimentConfig, d: &Dataset, gamma_lb: f64) -> Result<SolveReport, CliError> {
    let bb = black_box(cfg.black_box);
    let vs_opts = VsMcOptions { max_samples: cfg.max_samples, ..VsMcOptions::default() };
    let report = match cfg.algo {
        Algo::Perceptron => online_perceptron(d, BlackBox::UniformClassical, gamma_lb, cfg.epsilon, cfg.seed)?,
        Algo::PerceptronQ => online_perceptron(d, BlackBox::Qsearch, gamma_lb, cfg.epsilon, cfg.seed)?,
        Algo::VsMc => version_space_mc_perceptron(d, cfg.epsilon, VsMcMode::Classical, cfg.seed, vs_opts)?,
        Algo::VsMcGrover => version_space_mc_perceptron(d, cfg.epsilon, VsMcMode::Grover, cfg.seed, vs_opts)?,
        Algo::Ellipsoid => ellipsoid_solve(d, gamma_lb, cfg.epsilon, bb, cfg.seed)?,
        Algo::CuttingPlane => {
            let mut p = CuttingPlaneParams::new(gamma_lb, cfg.epsilon, bb);
            p.walk_steps = cfg.walk_steps;
            p.m_points = cfg.m_points;
            cutting_plane_solve(d, &p, cfg.seed)?
        }
        Algo::Qwalk => {
            let p = Algorithm3Params {
                grid_spacing: cfg.grid_spacing,
                ancilla_bits: cfg.ancilla_bits,
                depth: cfg.depth,
                laziness: cfg.laziness,
                black_box: bb,
                literal_z0: cfg.literal_z0,
                ..Algorithm3Params::new(gamma_lb, cfg.epsilon)
            };
            algorithm3_run(d, &p, cfg.seed)?.report
        }
    };
    Ok(report)
}

/// Runs one solver on one dataset.
pub fn solve(cfg: &ExperimentConfig) -> Result<SolveRow, CliError> {
    let d = build_dataset(cfg)?;
    let gamma_lb = match cfg.gamma_lb {
        GammaLb::Auto => d.margin()?.margin,
        GammaLb::Value(v) => v,
    };
    let report = run_solver(cfg, &d, gamma_lb)?;
    let in_vs = in_version_space(&report.solution, &d)?;
    Ok(SolveRow {
        algo: cfg.algo,
        dataset: cfg.dataset.clone(),
        gamma_lb,
        data_dim: d.dim(),
        data_size: d.size(),
        in_version_space: in_vs,
        report,
    })
}

impl SolveRow {
    pub fn cells(&self, seed: u64) -> Vec<String> {
        let l = &self.report.ledger;
        let w: Vec<String> = self.report.solution.weights().iter().map(|x| num(*x)).collect();
        vec![
            self.algo.to_string(),
            self.dataset.clone(),
            self.data_dim.to_string(),
            self.data_size.to_string(),
            num(self.gamma_lb),
            self.report.converged.to_string(),
            self.in_version_space.to_string(),
            self.report.rounds.to_string(),
            self.report.updates.to_string(),
            l.classical_queries.to_string(),
            l.quantum_queries.to_string(),
            l.membership_queries.to_string(),
            l.walk_applications.to_string(),
            l.arithmetic_ops.to_string(),
            l.verification_queries.to_string(),
            seed.to_string(),
            w.join(" "),
        ]
    }

    /// JSON object with the same fields plus the wall time.
    pub fn to_json(&self, seed: u64, wall_ms: f64) -> String {
        let mut obj = serde_json::Map::new();
        for (k, v) in COLUMNS.iter().zip(self.cells(seed)) {
            let value = v
                .parse::<u64>()
                .map(serde_json::Value::from)
                .or_else(|_| v.parse::<bool>().map(serde_json::Value::from))
                .unwrap_or(serde_json::Value::from(v));
            obj.insert(k.to_string(), value);
        }
        obj.insert("gamma_lb".into(), serde_json::Value::from(self.gamma_lb));
        obj.insert("wall_ms".into(), serde_json::Value::from(wall_ms));
        serde_json::Value::Object(obj).to_string()
    }
}

/// Runs the configured solver, writes `solve.csv` and prints a JSON line
/// including wall time. Not converging is reported through
/// [`Outcome::converged`].
pub fn solve_command(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let row = solve(cfg)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut table = Table::new(&COLUMNS);
    table.push(row.cells(cfg.seed));
    let mut files = Vec::new();
    emit(cfg, "solve", &table, None, &mut files)?;
    Ok(Outcome { converged: row.report.converged, files, summary: vec![row.to_json(cfg.seed, wall_ms)] })
}
