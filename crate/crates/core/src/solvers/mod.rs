//! Perceptron learners driven by a black box that finds misclassified
//! examples.

mod cutting_plane;
mod ellipsoid;
mod perceptron;
mod polytope;

pub use cutting_plane::{cutting_plane_solve, cutting_plane_rounds, CuttingPlaneParams};
pub use ellipsoid::{ellipsoid_rounds, ellipsoid_solve, EllipsoidState};
pub use perceptron::{online_perceptron, version_space_mc_perceptron, GsCostModel, VsMcMode, VsMcOptions};
pub use polytope::{
    affine_transform_from_points, hit_and_run_along, hit_and_run_step, membership,
    sample_unit_ball, AffineMap, CostModel, Cut, CutPolytope,
};

use crate::geometry::{Dataset, Hyperplane, RealVector};
use crate::ledger::QueryLedger;
use crate::qsearch::{qsearch, MarkedOracle};
use crate::rng::StreamRng;
use rand::Rng;

/// How a solver finds a misclassified example for its current hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlackBox {
    /// Uniform draws with one classical query each; an attempt is `N`
    /// draws and succeeds with probability at least `1 − 1/e`.
    UniformClassical,
    /// One [`qsearch`] per attempt; succeeds with probability at least 1/4.
    Qsearch,
}

/// Per-solver diagnostics beyond the headline numbers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveTrace {
    /// Indices of the examples that triggered each update, in order.
    pub mistakes: Vec<usize>,
    /// `√(det A_{t+1} / det A_t)` for every ellipsoid update.
    pub volume_ratios: Vec<f64>,
    /// Fraction of the walker set removed by each accepted cut.
    pub deleted_fractions: Vec<f64>,
    /// Final feasible region of a cutting-plane run.
    pub polytope: Option<CutPolytope>,
}

/// Outcome of a solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Hyperplane,
    pub rounds: u64,
    pub updates: u64,
    pub ledger: QueryLedger,
    /// True only if `solution` was checked to lie in the version space.
    pub converged: bool,
    /// Hypothesis at the start of each round.
    pub trajectory: Option<Vec<RealVector>>,
    pub trace: SolveTrace,
}

/// `⌈log_{3/4} x⌉` for `x ∈ (0, 1)`, at least 1.
pub(crate) fn retries_for(failure: f64) -> u64 {
    let j = (failure.ln() / 0.75f64.ln()).ceil();
    if j.is_finite() && j >= 1.0 {
        j as u64
    } else {
        1
    }
}

/// Explicit version-space check of `w`, charged to `verification_queries`.
pub(crate) fn verify(d: &Dataset, w: &RealVector, ledger: &mut QueryLedger) -> bool {
    ledger.verification_queries += d.size() as u64;
    d.separates(w)
}

/// Runs up to `attempts` black-box attempts for an example misclassified
/// by `w`. Returns its index, verified classically.
pub(crate) fn find_mistake(
    d: &Dataset,
    w: &RealVector,
    bb: BlackBox,
    attempts: u64,
    rng: &mut StreamRng,
    ledger: &mut QueryLedger,
) -> Option<usize> {
    let n = d.size();
    match bb {
        BlackBox::UniformClassical => {
            for _ in 0..attempts.saturating_mul(n as u64) {
                let i = rng.random_range(0..n);
                ledger.classical_queries += 1;
                if d.misclassifies(w, i) {
                    return Some(i);
                }
            }
            None
        }
        BlackBox::Qsearch => {
            let mut oracle =
                MarkedOracle::new(n, |i| d.misclassifies(w, i)).expect("datasets are non-empty");
            let mut found = None;
            for _ in 0..attempts {
                if let Some(i) = qsearch(&mut oracle, rng) {
                    found = Some(i);
                    break;
                }
            }
            ledger.merge(oracle.ledger());
            found
        }
    }
}

/// Checks the arguments shared by the margin-driven solvers.
pub(crate) fn check_margin_args(gamma_lb: f64, epsilon: f64) -> crate::Result<()> {
    if !(gamma_lb > 0.0 && gamma_lb <= 1.0) {
        return Err(crate::Error::InvalidArgument(format!("γ_lb must lie in (0,1], got {gamma_lb}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(crate::Error::InvalidArgument(format!("ε must lie in (0,1), got {epsilon}")));
    }
    Ok(())
}
