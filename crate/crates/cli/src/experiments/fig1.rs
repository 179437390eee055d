use super::{emit, Outcome};
use crate::config::ExperimentConfig;
use crate::csvout::{num, opt_num, Table};
use crate::svg::{LineChart, Series};
use crate::CliError;
use vslab_core::datasets::mohri_hard_dataset;
use vslab_core::geometry::{asymptotic_lower_bound, mc_version_space_probability, sector_probability, BoundRegime};
use vslab_core::rng::derive_seed;

/// Estimates below this are reported as censored.
pub const CENSOR_BELOW: f64 = 1e-6;

const COLUMNS: [&str; 11] = [
    "d",
    "gamma",
    "margin_bound",
    "mc",
    "mc_stderr",
    "mc_hits",
    "mc_trials",
    "censored",
    "lemma2",
    "eq4",
    "eq5",
];

/// Margin and version-space probability of the hard dataset for each `D`.
///
/// Monte-Carlo cells are left empty, with `censored = 1`, when the
/// estimate is below [`CENSOR_BELOW`].
pub fn fig1_experiment(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let mut table = Table::new(&COLUMNS);
    let mut summary = Vec::new();
    for dim in cfg.d_range.iter() {
        let d = mohri_hard_dataset(dim)?;
        let gamma = d.margin()?.margin;
        let bound = (0.5f64).powi(dim as i32 - 1).sqrt();
        let mc = mc_version_space_probability(&d, cfg.samples, derive_seed(cfg.seed, dim as u64))?;
        let censored = mc.estimate < CENSOR_BELOW;
        let lemma2 = sector_probability(gamma, dim)?;
        let eq4 = asymptotic_lower_bound(gamma, dim, BoundRegime::FixedD)?;
        let eq5 = asymptotic_lower_bound(gamma, dim, BoundRegime::LargeD)?;
        table.push(vec![
            dim.to_string(),
            num(gamma),
            num(bound),
            opt_num((!censored).then_some(mc.estimate)),
            opt_num((!censored).then_some(mc.stderr)),
            mc.hits.to_string(),
            mc.trials.to_string(),
            (censored as u8).to_string(),
            num(lemma2),
            num(eq4),
            num(eq5),
        ]);
        summary.push(format!(
            "D={dim} gamma={gamma:.6} mc={} lemma2={lemma2:.3e}",
            if censored { "censored".to_string() } else { format!("{:.3e}", mc.estimate) }
        ));
    }
    let mut files = Vec::new();
    emit(cfg, "fig1", &table, Some(render_fig1), &mut files)?;
    Ok(Outcome { converged: true, files, summary })
}

/// Log-scale chart of every `fig1` series against `D`.
pub fn render_fig1(t: &Table) -> Result<String, CliError> {
    let x = t.numbers("d")?;
    let mut series = Vec::new();
    for (col, name) in [
        ("gamma", "margin γ"),
        ("margin_bound", "√(1/2^(D−1))"),
        ("mc", "Monte Carlo"),
        ("lemma2", "sector probability"),
        ("eq4", "fixed-D bound"),
        ("eq5", "large-D bound"),
    ] {
        series.push(Series::from_columns(name, &x, &t.numbers(col)?));
    }
    Ok(LineChart {
        title: "Margin and version-space probability".into(),
        x_label: "D".into(),
        y_label: "value (log scale)".into(),
        log_x: false,
        log_y: true,
        series,
    }
    .render())
}
