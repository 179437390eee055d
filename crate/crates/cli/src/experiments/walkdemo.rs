use super::solve::build_dataset;
use super::{emit, Outcome};
use crate::config::{BlackBoxChoice, ExperimentConfig, GammaLb};
use crate::csvout::{num, Table};
use crate::svg::{LineChart, Series};
use crate::CliError;
use vslab_core::qwalk::{algorithm3_run, Algorithm3Params};
use vslab_core::solvers::BlackBox;

const COLUMNS: [&str; 11] = [
    "round",
    "grid_points",
    "overlap",
    "fidelity",
    "leaked",
    "in_vs_mass",
    "mean_x",
    "mean_y",
    "phase_gap",
    "epsilon2",
    "walk_applications",
];

/// Per-cut trace of the quantum-walk learner on a two-dimensional dataset.
///
/// Row 0 describes the initial uniform state. `walkdemo_ledger.csv` holds
/// the final counters.
pub fn walkdemo_command(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let d = build_dataset(cfg)?;
    if d.dim() != 2 {
        return Err(CliError::Input(format!("walkdemo needs D = 2, got {}", d.dim())));
    }
    let gamma_lb = match cfg.gamma_lb {
        GammaLb::Auto => d.margin()?.margin,
        GammaLb::Value(v) => v,
    };
    let params = Algorithm3Params {
        grid_spacing: cfg.grid_spacing,
        ancilla_bits: cfg.ancilla_bits,
        depth: cfg.depth,
        laziness: cfg.laziness,
        black_box: match cfg.black_box {
            BlackBoxChoice::Classical => BlackBox::UniformClassical,
            BlackBoxChoice::Qsearch => BlackBox::Qsearch,
        },
        literal_z0: cfg.literal_z0,
        ..Algorithm3Params::new(gamma_lb, cfg.epsilon)
    };
    let out = algorithm3_run(&d, &params, cfg.seed)?;
    let per_cut = vslab_core::qwalk::cut_cost(2, params.depth, params.ancilla_bits);

    let mut table = Table::new(&COLUMNS);
    let grid0 = out.rounds_log.first().map_or(out.final_grid.len(), |r| r.grid_before);
    table.push(vec![
        "0".into(),
        grid0.to_string(),
        num(1.0),
        num(1.0),
        num(0.0),
        num(out.initial_in_vs_mass),
        num(0.0),
        num(0.0),
        String::new(),
        String::new(),
        "0".into(),
    ]);
    for (k, r) in out.rounds_log.iter().enumerate() {
        table.push(vec![
            r.round.to_string(),
            r.grid_after.to_string(),
            num(r.overlap),
            num(r.fidelity),
            num(r.leaked),
            num(r.in_vs_mass),
            num(r.mean[0]),
            num(r.mean[1]),
            num(r.phase_gap),
            num(r.epsilon2),
            ((k as u64 + 1) * per_cut).to_string(),
        ]);
    }
    let l = &out.report.ledger;
    let mut ledger = Table::new(&[
        "converged",
        "rounds",
        "cuts",
        "final_in_vs_mass",
        "classical_queries",
        "quantum_queries",
        "membership_queries",
        "walk_applications",
        "verification_queries",
    ]);
    ledger.push(vec![
        out.report.converged.to_string(),
        out.report.rounds.to_string(),
        out.rounds_log.len().to_string(),
        num(out.final_in_vs_mass),
        l.classical_queries.to_string(),
        l.quantum_queries.to_string(),
        l.membership_queries.to_string(),
        l.walk_applications.to_string(),
        l.verification_queries.to_string(),
    ]);
    let accepted = out.rounds_log.len();
    let good = out.rounds_log.iter().filter(|r| r.overlap >= 1.0 / 3.0).count();
    let summary = vec![
        format!("converged={} rounds={} cuts={accepted}", out.report.converged, out.report.rounds),
        format!("in-VS mass {:.4} -> {:.4}", out.initial_in_vs_mass, out.final_in_vs_mass),
        format!("cuts with overlap >= 1/3: {good}/{accepted}"),
    ];
    let mut files = Vec::new();
    emit(cfg, "walkdemo", &table, Some(render_walkdemo), &mut files)?;
    emit(cfg, "walkdemo_ledger", &ledger, None, &mut files)?;
    Ok(Outcome { converged: out.report.converged, files, summary })
}

/// In-VS mass, overlap and leakage against the round number.
pub fn render_walkdemo(t: &Table) -> Result<String, CliError> {
    let x = t.numbers("round")?;
    let series = vec![
        Series::from_columns("in-VS mass", &x, &t.numbers("in_vs_mass")?),
        Series::from_columns("grid overlap", &x, &t.numbers("overlap")?),
        Series::from_columns("fidelity", &x, &t.numbers("fidelity")?),
        Series::from_columns("leaked", &x, &t.numbers("leaked")?),
    ];
    Ok(LineChart {
        title: "Grid mass evolution".into(),
        x_label: "round".into(),
        y_label: "probability".into(),
        log_x: false,
        log_y: false,
        series,
    }
    .render())
}
