use super::amplify::{pi3_amplify, reflections_in};
use super::grid::{discretize, EpsilonGrid};
use super::kernel::build_kernel;
use super::phase::PhaseReflection;
use super::spectral::SpectralWalk;
use super::state::{estimate_mean_nondestructive, omega, reflection_about_state, QuantumSampleState};
use crate::error::{Error, Result};
use crate::geometry::{Dataset, Hyperplane, RealVector};
use crate::ledger::QueryLedger;
use crate::qsearch::C64;
use crate::rng::stream;
use crate::solvers::{
    check_margin_args, cutting_plane_rounds, find_mistake, retries_for, verify, BlackBox, Cut, CutPolytope,
    SolveReport, SolveTrace,
};
use nalgebra::DVector;

/// Settings for [`algorithm3_run`].
#[derive(Debug, Clone, PartialEq)]
pub struct Algorithm3Params {
    pub gamma_lb: f64,
    pub epsilon: f64,
    pub grid_spacing: f64,
    pub ancilla_bits: u32,
    pub depth: u32,
    /// Holding probability of the grid walk, in `[0, 1)`.
    pub laziness: f64,
    pub black_box: BlackBox,
    /// Search for mistakes of the origin in every round instead of the
    /// current centroid.
    pub literal_z0: bool,
}

impl Algorithm3Params {
    pub fn new(gamma_lb: f64, epsilon: f64) -> Self {
        Self {
            gamma_lb,
            epsilon,
            grid_spacing: 0.1,
            ancilla_bits: 8,
            depth: 2,
            laziness: 0.5,
            black_box: BlackBox::Qsearch,
            literal_z0: false,
        }
    }
}

/// What happened in one round that produced a cut.
#[derive(Debug, Clone, PartialEq)]
pub struct Algorithm3Round {
    pub round: u64,
    pub grid_before: usize,
    pub grid_after: usize,
    /// `|Ω_{t+1}| / |Ω_t|`, the squared overlap of successive uniform states.
    pub overlap: f64,
    /// Squared overlap of the transported state with the new uniform state.
    pub fidelity: f64,
    /// Probability lost outside `Ω_{t+1} ⊗ |0⟩` by the transport.
    pub leaked: f64,
    /// Measurement mass of the renormalized state inside the version space.
    pub in_vs_mass: f64,
    pub mean: RealVector,
    pub phase_gap: f64,
    pub epsilon2: f64,
    pub measured_error: f64,
}

/// Result of [`algorithm3_run`].
#[derive(Debug, Clone)]
pub struct Algorithm3Outcome {
    pub final_state: QuantumSampleState,
    pub final_grid: EpsilonGrid,
    /// In-VS mass of the initial uniform state.
    pub initial_in_vs_mass: f64,
    pub final_in_vs_mass: f64,
    pub rounds_log: Vec<Algorithm3Round>,
    pub report: SolveReport,
}

/// Walk applications to transport a state across one cut: each `R_source`
/// runs phase estimation forward and backward on `2^b − 1` controlled walks.
pub fn transport_cost(depth: u32, ancilla_bits: u32) -> u64 {
    reflections_in(depth) * 2 * ((1u64 << ancilla_bits) - 1)
}

/// Walk applications charged per accepted cut: the transport, `D` more for
/// the mean estimate and `D²` for the copies fed to the affine transform.
pub fn cut_cost(dim: usize, depth: u32, ancilla_bits: u32) -> u64 {
    let d = dim as u64;
    transport_cost(depth, ancilla_bits) * (1 + d + d * d)
}

/// Measurement mass of `amp` on the grid points that separate `d`.
pub fn in_version_space_mass(d: &Dataset, g: &EpsilonGrid, amp: &DVector<C64>) -> f64 {
    g.points().iter().zip(amp.iter()).filter(|(x, _)| d.separates(x)).map(|(_, a)| a.norm_sqr()).sum()
}

/// Cutting-plane learning with quantum samples of the feasible grid.
///
/// The state starts uniform on the grid of the unit disk and the centroid
/// at `0`. Rounds follow the cutting-plane schedule. After each cut through
/// the centroid the state is carried to the uniform state on the smaller
/// grid by fixed-point amplification. The source reflection comes from
/// phase estimation on the previous grid's walk and the target reflection
/// is exact. The new centroid is read from the carried state.
pub fn algorithm3_run(d: &Dataset, params: &Algorithm3Params, seed: u64) -> Result<Algorithm3Outcome> {
    check_margin_args(params.gamma_lb, params.epsilon)?;
    if d.dim() != 2 {
        return Err(Error::InvalidArgument(format!("quantum walk learner needs D = 2, got {}", d.dim())));
    }
    let dim = d.dim();
    let b = 1usize << params.ancilla_bits;
    let max_rounds = cutting_plane_rounds(dim, params.gamma_lb);
    let attempts = retries_for(params.epsilon / max_rounds as f64);
    let transport = transport_cost(params.depth, params.ancilla_bits);

    let mut rng = stream(seed);
    let mut ledger = QueryLedger::new();
    let mut trace = SolveTrace::default();
    let mut trajectory = Vec::new();
    let mut log = Vec::new();

    let mut poly = CutPolytope::new(dim);
    let mut grid = discretize(&poly, params.grid_spacing)?;
    ledger.membership_queries += grid.candidates();
    let mut state = QuantumSampleState::uniform(grid.len())?;
    let initial_in_vs_mass = in_version_space_mass(d, &grid, state.amplitudes());
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
        let probe = if params.literal_z0 { RealVector::zeros(dim) } else { z.clone() };
        let Some(i) = find_mistake(d, &probe, params.black_box, attempts, &mut rng, &mut ledger) else {
            continue;
        };
        trace.mistakes.push(i);
        let mut next_poly = poly.clone();
        next_poly.push(Cut::new(d.signed_example(i).clone(), z.clone())?)?;
        let next_grid = discretize(&next_poly, params.grid_spacing)?;
        ledger.membership_queries += next_grid.candidates();
        let kept_idx = grid.embed(&next_grid)?;
        let overlap = next_grid.len() as f64 / grid.len() as f64;

        let kernel = build_kernel(&grid, params.laziness)?;
        let walk = SpectralWalk::from_kernel(&kernel);
        let r_source = PhaseReflection::in_eigenbasis(walk.phases().to_vec(), walk.phase_gap(), params.ancilla_bits)?;
        let target_amp = {
            let mut t = DVector::<C64>::zeros(grid.len());
            let a = C64::new(1.0 / (next_grid.len() as f64).sqrt(), 0.0);
            for &k in &kept_idx {
                t[k] = a;
            }
            t
        };
        let target = QuantumSampleState::normalized(walk.embed(&target_amp, b))?;
        let r_target = reflection_about_state(&target, omega())?;
        let start = QuantumSampleState::normalized(walk.embed(state.amplitudes(), b))?;
        let moved = pi3_amplify(&start, &r_source, &r_target, params.depth)?;
        let projected = walk.project(moved.amplitudes(), b);
        let kept = DVector::from_iterator(kept_idx.len(), kept_idx.iter().map(|&k| projected[k]));
        let kept_mass = kept.norm_squared();
        if !(kept_mass > 1e-12) {
            return Err(Error::Numerical("transported state left the new grid".into()));
        }
        let fidelity = target_amp.dotc(&projected).norm_sqr();
        state = QuantumSampleState::normalized(kept)?;

        z = estimate_mean_nondestructive(&state, &next_grid, &mut ledger, transport)?;
        ledger.walk_applications += transport * (1 + (dim * dim) as u64);
        log.push(Algorithm3Round {
            round: rounds,
            grid_before: grid.len(),
            grid_after: next_grid.len(),
            overlap,
            fidelity,
            leaked: 1.0 - kept_mass,
            in_vs_mass: in_version_space_mass(d, &next_grid, state.amplitudes()),
            mean: z.clone(),
            phase_gap: walk.phase_gap(),
            epsilon2: r_source.epsilon2,
            measured_error: r_source.measured_error,
        });
        poly = next_poly;
        grid = next_grid;
    }
    if !converged {
        converged = verify(d, &z, &mut ledger);
    }
    let final_in_vs_mass = in_version_space_mass(d, &grid, state.amplitudes());
    trace.polytope = Some(poly);
    Ok(Algorithm3Outcome {
        final_state: state,
        final_grid: grid,
        initial_in_vs_mass,
        final_in_vs_mass,
        rounds_log: log,
        report: SolveReport {
            solution: Hyperplane::from(z),
            rounds,
            updates: trace.mistakes.len() as u64,
            ledger,
            converged,
            trajectory: Some(trajectory),
            trace,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::mohri_hard_dataset;
    use crate::geometry::{Label, LabeledExample};
    use crate::qwalk::{approx_reflection_phase_estimation, build_szegedy, with_zero_ancilla};

    #[test]
    fn spectral_transport_matches_dense_walk() {
        let bits = 3;
        let bsz = 1 << bits;
        let g = discretize(&CutPolytope::new(2), 0.5).unwrap();
        let mut p = CutPolytope::new(2);
        p.push(Cut::new(RealVector::from_vec(vec![0.6, 0.8]), RealVector::from_vec(vec![0.1, -0.2])).unwrap()).unwrap();
        let h = discretize(&p, 0.5).unwrap();
        let idx = g.embed(&h).unwrap();
        let n = g.len();
        let k = build_kernel(&g, 0.3).unwrap();
        let start_amp = DVector::from_fn(n, |i, _| C64::new(1.0 + i as f64 * 0.1, 0.05 * i as f64)).normalize();
        let mut target_amp = DVector::<C64>::zeros(n);
        for &i in &idx {
            target_amp[i] = C64::new(1.0 / (idx.len() as f64).sqrt(), 0.0);
        }

        let s = SpectralWalk::from_kernel(&k);
        let rs = PhaseReflection::in_eigenbasis(s.phases().to_vec(), s.phase_gap(), bits).unwrap();
        let rt = reflection_about_state(&QuantumSampleState::new(s.embed(&target_amp, bsz)).unwrap(), omega()).unwrap();
        let start = QuantumSampleState::new(s.embed(&start_amp, bsz)).unwrap();
        let spectral = s.project(pi3_amplify(&start, &rs, &rt, 2).unwrap().amplitudes(), bsz);

        let w = build_szegedy(&k).unwrap();
        let lift = |a: &DVector<C64>| {
            let mut v = DVector::<C64>::zeros(n * n);
            for x in 0..n {
                v[x * n] = a[x];
            }
            with_zero_ancilla(&v, bits)
        };
        let rs = approx_reflection_phase_estimation(&w, bits).unwrap();
        let rt = reflection_about_state(&QuantumSampleState::new(lift(&target_amp)).unwrap(), omega()).unwrap();
        let out = pi3_amplify(&QuantumSampleState::new(lift(&start_amp)).unwrap(), &rs, &rt, 2).unwrap();
        let dense = DVector::from_fn(n, |x, _| out.amplitudes()[x * n * bsz]);
        assert!((spectral - dense).norm() < 1e-9);
    }

    #[test]
    fn mohri_run_accounting_and_overlaps() {
        let d = mohri_hard_dataset(2).unwrap();
        let params = Algorithm3Params::new(d.margin().unwrap().margin, 0.1);
        let out = algorithm3_run(&d, &params, 7).unwrap();
        let cuts = out.rounds_log.len() as u64;
        assert!(cuts > 0);
        assert_eq!(out.report.ledger.walk_applications, cuts * cut_cost(2, 2, 8));
        for r in &out.rounds_log {
            assert!(r.leaked > -1e-9 && r.leaked < 1.0);
            assert!(r.fidelity <= 1.0 + 1e-9);
        }
        assert!((out.final_state.amplitudes().norm() - 1.0).abs() < 1e-9);
        assert!(out.final_in_vs_mass > out.initial_in_vs_mass);
        let again = algorithm3_run(&d, &params, 7).unwrap();
        assert_eq!(again.rounds_log, out.rounds_log);
    }

    #[test]
    fn single_example_mean_is_inside_half_space() {
        let x = LabeledExample::new(RealVector::from_vec(vec![0.6, 0.8]), Label::Pos).unwrap();
        let d = Dataset::new(vec![x]).unwrap();
        let params = Algorithm3Params::new(0.5, 0.1);
        let out = algorithm3_run(&d, &params, 3).unwrap();
        assert!(out.report.converged);
        let z = out.report.solution.weights();
        assert!(z.dot(d.signed_example(0)) > 0.0);
    }

    #[test]
    fn rejects_other_dimensions() {
        let d = mohri_hard_dataset(3).unwrap();
        assert!(algorithm3_run(&d, &Algorithm3Params::new(0.1, 0.1), 0).is_err());
    }
}
