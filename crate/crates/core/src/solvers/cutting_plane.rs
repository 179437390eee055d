use super::polytope::{hit_and_run_along, sample_unit_ball, AffineMap, CostModel, Cut, CutPolytope};
use super::{check_margin_args, find_mistake, retries_for, verify, BlackBox, SolveReport, SolveTrace};
use crate::error::{Error, Result};
use crate::geometry::{Dataset, Hyperplane, RealVector};
use crate::ledger::QueryLedger;
use crate::rng::{derive_seed, stream, substream, StreamRng};
use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Parameters of [`cutting_plane_solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuttingPlaneParams {
    pub gamma_lb: f64,
    pub epsilon: f64,
    pub black_box: BlackBox,
    /// Points averaged per centroid; the walker set holds `2M`. Defaults
    /// to `4D`.
    pub m_points: Option<usize>,
    /// Hit-and-run steps per refill chain. Defaults to `50D`.
    pub walk_steps: Option<usize>,
    /// Chord-end bisection tolerance.
    pub bisection_tol: f64,
    /// Ridge added to the second-moment matrix before whitening.
    pub ridge: f64,
    pub membership_cost: CostModel,
    /// Run refill chains on the rayon pool. Results do not depend on it.
    pub parallel: bool,
}

impl CuttingPlaneParams {
    pub fn new(gamma_lb: f64, epsilon: f64, black_box: BlackBox) -> Self {
        Self {
            gamma_lb,
            epsilon,
            black_box,
            m_points: None,
            walk_steps: None,
            bisection_tol: 1e-6,
            ridge: 1e-8,
            membership_cost: CostModel::Classical,
            parallel: true,
        }
    }
}

/// `⌈D log_{3/2}(D/γ_lb)⌉`.
pub fn cutting_plane_rounds(dim: usize, gamma_lb: f64) -> u64 {
    let d = dim as f64;
    (d * (d / gamma_lb).ln() / 1.5f64.ln()).ceil().max(1.0) as u64
}

fn mean(points: &[RealVector], dim: usize) -> RealVector {
    let mut m = RealVector::zeros(dim);
    for p in points {
        m += p;
    }
    m / points.len().max(1) as f64
}

fn run_chain(
    start: &RealVector,
    map: &AffineMap,
    poly: &CutPolytope,
    steps: usize,
    tol: f64,
    model: CostModel,
    rng: &mut StreamRng,
) -> Result<(RealVector, QueryLedger)> {
    let mut ledger = QueryLedger::new();
    let mut x = start.clone();
    for _ in 0..steps {
        let e = RealVector::from_fn(poly.dim(), |_, _| rng.sample(StandardNormal));
        let dir = &map.unwhiten * e;
        if dir.norm() < 1e-300 {
            continue;
        }
        x = hit_and_run_along(&x, &dir, poly, tol, rng, &mut ledger, model)?;
    }
    Ok((x, ledger))
}

/// Online cutting-plane method with centroids estimated by hit-and-run.
///
/// Keeps `2M` walkers in the current polytope and the centroid estimate
/// `z` (initially `0`). Each of at most `⌈D log_{3/2}(D/γ_lb)⌉` rounds:
///
/// 1. stop if `z` separates the data;
/// 2. make up to `⌈log_{3/4}(ε/r)⌉` black-box attempts for a mistake `(x, y)`;
/// 3. add the cut `(w − z)ᵀxy > 0` and drop walkers that violate it;
/// 4. whiten the survivors and refill to `2M` with hit-and-run chains run
///    in whitened coordinates;
/// 5. take `M` walkers at random, set `z` to their mean and discard them.
///
/// When fewer than `D+1` walkers survive a cut, the chains use the
/// identity transform; when none survive they start from `z + η·xy` with
/// `η` halved from 1/2 until that point is feasible.
pub fn cutting_plane_solve(d: &Dataset, params: &CuttingPlaneParams, seed: u64) -> Result<SolveReport> {
    check_margin_args(params.gamma_lb, params.epsilon)?;
    let dim = d.dim();
    let m = params.m_points.unwrap_or(4 * dim);
    if m < dim + 1 {
        return Err(Error::InvalidArgument(format!("M must be at least D+1 = {}, got {m}", dim + 1)));
    }
    let steps = params.walk_steps.unwrap_or(50 * dim);
    if !(params.bisection_tol > 0.0) {
        return Err(Error::InvalidArgument("bisection tolerance must be positive".into()));
    }
    let max_rounds = cutting_plane_rounds(dim, params.gamma_lb);
    let attempts = retries_for(params.epsilon / max_rounds as f64);

    let mut rng = stream(seed);
    let mut ledger = QueryLedger::new();
    let mut trace = SolveTrace::default();
    let mut trajectory = Vec::new();
    let mut poly = CutPolytope::new(dim);
    let mut walkers: Vec<RealVector> = (0..2 * m).map(|_| sample_unit_ball(dim, &mut rng)).collect();
    let mut z = RealVector::zeros(dim);
    let mut rounds = 0u64;
    let mut converged = false;

    while rounds < max_rounds {
        trajectory.push(z.clone());
        if verify(d, &z, &mut ledger) {
            converged = true;
            break;
        }
        rounds += 1;
        let Some(i) = find_mistake(d, &z, params.black_box, attempts, &mut rng, &mut ledger) else {
            continue;
        };
        trace.mistakes.push(i);
        let dir = d.signed_example(i).clone();
        let cut = Cut::new(dir.clone(), z.clone())?;
        let before = walkers.len();
        walkers.retain(|w| cut.admits(w));
        ledger.arithmetic_ops += before as u64;
        trace.deleted_fractions.push((before - walkers.len()) as f64 / before as f64);
        poly.push(cut)?;

        if walkers.is_empty() {
            let mut eta = 0.5;
            loop {
                let x = &z + &dir * eta;
                if poly.membership(&x, &mut ledger, params.membership_cost)? {
                    walkers.push(x);
                    break;
                }
                eta *= 0.5;
                if eta < 1e-12 {
                    return Err(Error::WalkersExhausted);
                }
            }
        }
        let center = mean(&walkers, dim);
        let map = if walkers.len() > dim {
            AffineMap::from_points(&walkers, &center, params.ridge)?
        } else {
            AffineMap::identity(center)
        };

        let need = 2 * m - walkers.len();
        let starts: Vec<usize> = (0..need).map(|_| rng.random_range(0..walkers.len())).collect();
        let chain_seed = derive_seed(seed, rounds);
        let chain = |c: usize| {
            let mut crng = substream(chain_seed, c as u64);
            run_chain(&walkers[starts[c]], &map, &poly, steps, params.bisection_tol, params.membership_cost, &mut crng)
        };
        let fresh: Vec<Result<(RealVector, QueryLedger)>> = if params.parallel {
            (0..need).into_par_iter().map(chain).collect()
        } else {
            (0..need).map(chain).collect()
        };
        for r in fresh {
            let (x, l) = r?;
            ledger.merge(&l);
            walkers.push(x);
        }

        let mut picked: Vec<usize> = sample(&mut rng, walkers.len(), m).into_vec();
        picked.sort_unstable_by(|a, b| b.cmp(a));
        let chosen: Vec<RealVector> = picked.iter().map(|&k| walkers.swap_remove(k)).collect();
        z = mean(&chosen, dim);
        ledger.arithmetic_ops += (m * dim) as u64;
    }
    if !converged {
        converged = verify(d, &z, &mut ledger);
    }
    trace.polytope = Some(poly);
    Ok(SolveReport {
        solution: Hyperplane::from(z),
        rounds,
        updates: trace.mistakes.len() as u64,
        ledger,
        converged,
        trajectory: Some(trajectory),
        trace,
    })
}
