//! Exact small-scale simulation of quantum walks on discretized polytopes
//! and of the quantum cutting-plane learner built on them.

mod algorithm3;
mod amplify;
mod grid;
mod kernel;
mod phase;
mod spectral;
pub mod state;
mod szegedy;

pub use algorithm3::{
    algorithm3_run, cut_cost, in_version_space_mass, transport_cost, Algorithm3Outcome, Algorithm3Params,
    Algorithm3Round,
};
pub use amplify::{pi3_amplify, reflections_in, MAX_AMPLIFY_DEPTH};
pub use grid::{discretize, overlap_lower_bound_check, EpsilonGrid, GRID_CANDIDATE_LIMIT};
pub use kernel::{build_kernel, WalkKernel, KERNEL_TOL};
pub use phase::{
    ancilla_vector, approx_reflection_phase_estimation, fwht, leakage_envelope, with_zero_ancilla,
    PhaseReflection, MAX_ANCILLA_BITS, REFLECTION_SIZE_LIMIT,
};
pub use spectral::SpectralWalk;
pub use state::{
    estimate_mean_nondestructive, omega, reflection_about_state, Operator, QuantumSampleState, Reflection,
    STATE_NORM_TOL,
};
pub use szegedy::{build_szegedy, build_szegedy_with, Completion, SzegedyWalk, PHASE_ZERO_TOL, SZEGEDY_DIM_LIMIT};
