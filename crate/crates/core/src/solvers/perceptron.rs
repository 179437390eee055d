use super::{check_margin_args, find_mistake, verify, BlackBox, SolveReport, SolveTrace};
use crate::error::{Error, Result};
use crate::geometry::{
    mc_version_space_probability, required_sample_count, sector_probability, Dataset, Hyperplane, RealVector,
};
use crate::ledger::QueryLedger;
use crate::qsearch::{qsearch, MarkedOracle};
use crate::rng::{derive_seed, stream};
use rand::Rng;
use rand_distr::StandardNormal;

/// Online perceptron fed by a mistake-finding black box.
///
/// Starts from `w = 0` and runs at most `⌈1/γ_lb²⌉` rounds. Each round
/// checks `w` against the whole dataset (logged as verification), asks the
/// black box for a misclassified example and adds `yx` to `w`. The failure
/// budget `ε` is split evenly over rounds: a classical round makes up to
/// `N⌈ln(1/δ)⌉` draws, a quantum round up to `⌈log_{3/4} δ⌉` searches.
pub fn online_perceptron(
    d: &Dataset,
    bb: BlackBox,
    gamma_lb: f64,
    epsilon: f64,
    seed: u64,
) -> Result<SolveReport> {
    check_margin_args(gamma_lb, epsilon)?;
    let max_rounds = (1.0 / (gamma_lb * gamma_lb)).ceil().max(1.0) as u64;
    let delta = epsilon / max_rounds as f64;
    let attempts = match bb {
        BlackBox::UniformClassical => (1.0 / delta).ln().ceil().max(1.0) as u64,
        BlackBox::Qsearch => super::retries_for(delta),
    };
    let mut rng = stream(seed);
    let mut ledger = QueryLedger::new();
    let mut w = RealVector::zeros(d.dim());
    let mut trace = SolveTrace::default();
    let mut trajectory = Vec::new();
    let mut rounds = 0;
    let mut converged = false;
    while rounds < max_rounds {
        trajectory.push(w.clone());
        if verify(d, &w, &mut ledger) {
            converged = true;
            break;
        }
        rounds += 1;
        if let Some(i) = find_mistake(d, &w, bb, attempts, &mut rng, &mut ledger) {
            w += d.signed_example(i);
            ledger.arithmetic_ops += d.dim() as u64;
            trace.mistakes.push(i);
        }
    }
    if !converged {
        converged = verify(d, &w, &mut ledger);
    }
    Ok(SolveReport {
        solution: Hyperplane::from(w),
        rounds,
        updates: trace.mistakes.len() as u64,
        ledger,
        converged,
        trajectory: Some(trajectory),
        trace,
    })
}

/// How the sampled hyperplanes are searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VsMcMode {
    /// Check every sample in turn with a full pass over the data.
    Classical,
    /// Grover search over the samples with the "separates all" predicate.
    Grover,
}

/// Cost of one evaluation of the "separates all examples" oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsCostModel {
    /// `N` example queries per evaluation.
    Scan,
    /// `⌈√N⌉` quantum queries per evaluation, as with a counting-based
    /// realization. Only the charge changes; the simulation is identical.
    Counting,
}

/// Knobs for [`version_space_mc_perceptron`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VsMcOptions {
    /// Success probability of one sample. Estimated by Monte Carlo when
    /// absent.
    pub p: Option<f64>,
    /// Trials for that estimate.
    pub estimate_trials: u64,
    /// Largest sample count the caller is willing to draw.
    pub max_samples: u64,
    pub gs_cost: GsCostModel,
}

impl Default for VsMcOptions {
    fn default() -> Self {
        Self { p: None, estimate_trials: 100_000, max_samples: 10_000_000, gs_cost: GsCostModel::Scan }
    }
}

/// Draws `K = ⌈(1/p) ln(1/δ)⌉` standard-normal hyperplanes and looks for
/// one in the version space.
///
/// Without `opts.p`, `p` is a Monte-Carlo estimate; if that sees no hit,
/// the margin lower bound [`sector_probability`]`(γ, D)` is used instead.
///
/// Fails with [`Error::BudgetExceeded`] when `K` exceeds
/// `opts.max_samples`. `trace.mistakes` is unused; the number of oracle
/// evaluations over samples is `rounds` in classical mode and the number
/// of Grover iterations plus verifications in Grover mode.
pub fn version_space_mc_perceptron(
    d: &Dataset,
    delta: f64,
    mode: VsMcMode,
    seed: u64,
    opts: VsMcOptions,
) -> Result<SolveReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("δ must lie in (0,1), got {delta}")));
    }
    let p = match opts.p {
        Some(p) => p,
        None => {
            let est = mc_version_space_probability(d, opts.estimate_trials.max(1), derive_seed(seed, 1))?;
            if est.hits > 0 {
                est.estimate
            } else {
                sector_probability(d.margin()?.margin, d.dim())?
            }
        }
    };
    let k = required_sample_count(p, delta)?;
    if k > opts.max_samples {
        return Err(Error::BudgetExceeded { required: k, budget: opts.max_samples });
    }
    let n = d.size() as u64;
    let mut rng = stream(seed);
    let samples: Vec<RealVector> = (0..k)
        .map(|_| RealVector::from_fn(d.dim(), |_, _| rng.sample(StandardNormal)))
        .collect();
    let mut ledger = QueryLedger::new();
    let mut found = None;
    let mut rounds = 0u64;
    match mode {
        VsMcMode::Classical => {
            for (i, w) in samples.iter().enumerate() {
                rounds += 1;
                ledger.classical_queries += n;
                if d.separates(w) {
                    found = Some(i);
                    break;
                }
            }
        }
        VsMcMode::Grover => {
            let mut oracle = MarkedOracle::new(samples.len(), |i| d.separates(&samples[i]))?;
            for _ in 0..super::retries_for(delta) {
                rounds += 1;
                if let Some(i) = qsearch(&mut oracle, &mut rng) {
                    found = Some(i);
                    break;
                }
            }
            let sim = oracle.ledger();
            let per_eval = match opts.gs_cost {
                GsCostModel::Scan => n,
                GsCostModel::Counting => (n as f64).sqrt().ceil() as u64,
            };
            ledger.quantum_queries += sim.quantum_queries * per_eval;
            ledger.classical_queries += sim.classical_queries * n;
        }
    }
    let solution = Hyperplane::from(samples[found.unwrap_or(0)].clone());
    let converged = match found {
        Some(_) => verify(d, solution.weights(), &mut ledger),
        None => false,
    };
    Ok(SolveReport {
        solution,
        rounds,
        updates: 0,
        ledger,
        converged,
        trajectory: None,
        trace: SolveTrace::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::{mohri_hard_dataset, random_separable_dataset};
    use crate::geometry::{in_version_space, Label, LabeledExample};

    fn single() -> Dataset {
        Dataset::new(vec![LabeledExample::new(RealVector::from_column_slice(&[0.6, 0.8]), Label::Pos).unwrap()])
            .unwrap()
    }

    #[test]
    fn perceptron_on_mohri_two() {
        let d = mohri_hard_dataset(2).unwrap();
        let g = d.margin().unwrap().margin;
        for seed in 0..20 {
            let r = online_perceptron(&d, BlackBox::UniformClassical, g, 0.01, seed).unwrap();
            assert!(r.converged);
            assert!(r.updates <= 7);
            assert!(in_version_space(&r.solution, &d).unwrap());
            let q = online_perceptron(&d, BlackBox::Qsearch, g, 0.01, seed).unwrap();
            assert!(q.converged && q.updates <= 7);
        }
    }

    #[test]
    fn single_example_needs_one_update() {
        let r = online_perceptron(&single(), BlackBox::UniformClassical, 1.0, 0.1, 3).unwrap();
        assert!(r.converged);
        assert_eq!(r.updates, 1);
        assert_eq!(r.solution.weights(), &RealVector::from_column_slice(&[0.6, 0.8]));
    }

    #[test]
    fn perceptron_is_deterministic() {
        let d = random_separable_dataset(4, 200, 0.2, 1).unwrap();
        let a = online_perceptron(&d, BlackBox::Qsearch, 0.2, 0.05, 9).unwrap();
        let b = online_perceptron(&d, BlackBox::Qsearch, 0.2, 0.05, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn quantum_box_uses_fewer_queries_on_large_data() {
        let d = random_separable_dataset(3, 1024, 0.1, 4).unwrap();
        let g = d.margin().unwrap().margin.min(0.5);
        let c = online_perceptron(&d, BlackBox::UniformClassical, g, 0.05, 2).unwrap();
        let q = online_perceptron(&d, BlackBox::Qsearch, g, 0.05, 2).unwrap();
        assert!(c.converged && q.converged);
        assert!(q.ledger.quantum_queries < c.ledger.classical_queries);
    }

    #[test]
    fn high_dimension_exceeds_budget() {
        let d = mohri_hard_dataset(9).unwrap();
        let r = version_space_mc_perceptron(&d, 0.1, VsMcMode::Classical, 0, VsMcOptions::default());
        assert!(matches!(r, Err(Error::BudgetExceeded { required, .. }) if required > 10_000_000));
    }

    #[test]
    fn sample_count_and_success_rate() {
        let opts = VsMcOptions { p: Some(0.5), ..VsMcOptions::default() };
        let mut ok = 0;
        for seed in 0..400 {
            let r = version_space_mc_perceptron(&single(), 0.01, VsMcMode::Classical, seed, opts).unwrap();
            assert!(r.rounds <= 10);
            ok += r.converged as u32;
        }
        assert!(ok >= 396, "{ok}");
        let d = mohri_hard_dataset(2).unwrap();
        let opts = VsMcOptions { p: Some(0.125), ..VsMcOptions::default() };
        let r = version_space_mc_perceptron(&d, 0.01, VsMcMode::Grover, 4, opts).unwrap();
        assert!(r.converged);
        assert!(in_version_space(&r.solution, &d).unwrap());
        let tight = VsMcOptions { max_samples: 36, ..opts };
        assert_eq!(
            version_space_mc_perceptron(&d, 0.01, VsMcMode::Classical, 4, tight),
            Err(Error::BudgetExceeded { required: 37, budget: 36 })
        );
    }

    #[test]
    fn grover_mode_matches_classical_solutions() {
        let d = mohri_hard_dataset(3).unwrap();
        for seed in 0..10 {
            let c = version_space_mc_perceptron(&d, 0.01, VsMcMode::Classical, seed, VsMcOptions::default()).unwrap();
            let q = version_space_mc_perceptron(&d, 0.01, VsMcMode::Grover, seed, VsMcOptions::default()).unwrap();
            if q.converged {
                assert!(in_version_space(&q.solution, &d).unwrap());
            }
            assert!(c.converged == in_version_space(&c.solution, &d).unwrap());
        }
    }
}
