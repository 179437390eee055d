use super::{emit, Outcome};
use crate::config::ExperimentConfig;
use crate::csvout::{num, Table};
use crate::svg::{LineChart, Series};
use crate::CliError;
use rayon::prelude::*;
use vslab_core::datasets::planted_dataset;
use vslab_core::rng::derive_seed;
use vslab_core::solvers::{online_perceptron, BlackBox};
use vslab_core::QueryLedger;

const VARIANTS: [(&str, BlackBox); 2] = [("classical", BlackBox::UniformClassical), ("quantum", BlackBox::Qsearch)];

/// Least-squares slope and intercept of `ln y` against `ln x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| (sxy / sxx, my - sxy / sxx * mx))
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, 0.0);
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Query totals of the perceptron with each black box, as `N` doubles.
///
/// For every `N` (powers of two in `n-range`) and trial, a planted dataset
/// with `D = d` and margin `margin` is drawn and solved by both variants
/// with `γ_lb = margin`. Trials run in parallel and are collected in a
/// fixed order.
pub fn scaling_experiment(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let ns = cfg.n_range.powers_of_two();
    let jobs: Vec<(usize, usize, u32)> = ns
        .iter()
        .flat_map(|&n| (0..VARIANTS.len()).flat_map(move |v| (0..cfg.trials).map(move |t| (n, v, t))))
        .collect();
    let ledgers: Vec<(QueryLedger, bool)> = jobs
        .par_iter()
        .map(|&(n, v, t)| {
            let seed = derive_seed(derive_seed(cfg.seed, n as u64), t as u64);
            let d = planted_dataset(cfg.d, n, cfg.margin, seed)?;
            let r = online_perceptron(&d, VARIANTS[v].1, cfg.margin, cfg.epsilon, derive_seed(seed, 1 + v as u64))?;
            Ok((r.ledger, r.converged))
        })
        .collect::<Result<_, CliError>>()?;

    let mut table = Table::new(&["n", "variant", "trials", "mean_classical_queries", "mean_quantum_queries", "stderr"]);
    let mut fits: Vec<Vec<(f64, f64)>> = vec![Vec::new(); VARIANTS.len()];
    let mut failures = 0usize;
    let per = cfg.trials as usize;
    for (chunk, &(n, v, _)) in ledgers.chunks(per).zip(jobs.iter().step_by(per)) {
        failures += chunk.iter().filter(|(_, ok)| !ok).count();
        let c: Vec<f64> = chunk.iter().map(|(l, _)| l.classical_queries as f64).collect();
        let q: Vec<f64> = chunk.iter().map(|(l, _)| l.quantum_queries as f64).collect();
        let tot: Vec<f64> = chunk.iter().map(|(l, _)| l.total_queries() as f64).collect();
        let (mc, _) = mean_and_stderr(&c);
        let (mq, _) = mean_and_stderr(&q);
        let (mt, se) = mean_and_stderr(&tot);
        fits[v].push((n as f64, mt));
        table.push(vec![n.to_string(), VARIANTS[v].0.into(), cfg.trials.to_string(), num(mc), num(mq), num(se)]);
    }

    let mut fit_table = Table::new(&["variant", "slope", "intercept"]);
    let mut summary = Vec::new();
    for (v, pts) in fits.iter().enumerate() {
        if let Some((slope, icpt)) = fit_slope(pts) {
            fit_table.push(vec![VARIANTS[v].0.into(), num(slope), num(icpt)]);
            summary.push(format!("{} slope {slope:.3}", VARIANTS[v].0));
        }
    }
    if failures > 0 {
        summary.push(format!("{failures} runs did not converge"));
    }
    let mut files = Vec::new();
    emit(cfg, "scaling", &table, Some(render_scaling), &mut files)?;
    emit(cfg, "scaling_fit", &fit_table, None, &mut files)?;
    Ok(Outcome { converged: true, files, summary })
}

/// Log-log chart of mean total queries against `N` per variant.
pub fn render_scaling(t: &Table) -> Result<String, CliError> {
    let n = t.numbers("n")?;
    let c = t.numbers("mean_classical_queries")?;
    let q = t.numbers("mean_quantum_queries")?;
    let vc = t.column("variant").ok_or_else(|| CliError::Input("missing column variant".into()))?;
    let mut series = Vec::new();
    for (name, _) in VARIANTS {
        let pick = |i: usize| t.rows[i][vc] == name;
        let xs: Vec<Option<f64>> = (0..t.rows.len()).filter(|&i| pick(i)).map(|i| n[i]).collect();
        let ys: Vec<Option<f64>> =
            (0..t.rows.len()).filter(|&i| pick(i)).map(|i| Some(c[i]? + q[i]?)).collect();
        series.push(Series::from_columns(name, &xs, &ys));
    }
    Ok(LineChart {
        title: "Perceptron query cost".into(),
        x_label: "N".into(),
        y_label: "mean queries".into(),
        log_x: true,
        log_y: true,
        series,
    }
    .render())
}
