use super::state::{Operator, QuantumSampleState};
use crate::error::{Error, Result};
use crate::qsearch::C64;
use nalgebra::DVector;

/// Largest recursion depth accepted by [`pi3_amplify`].
pub const MAX_AMPLIFY_DEPTH: u32 = 4;

fn forward(m: u32, v: DVector<C64>, rs: &dyn Operator, rt: &dyn Operator) -> DVector<C64> {
    if m == 0 {
        return v;
    }
    let a = forward(m - 1, v, rs, rt);
    let b = backward(m - 1, rt.apply(&a), rs, rt);
    forward(m - 1, rs.apply(&b), rs, rt)
}

fn backward(m: u32, v: DVector<C64>, rs: &dyn Operator, rt: &dyn Operator) -> DVector<C64> {
    if m == 0 {
        return v;
    }
    let a = backward(m - 1, v, rs, rt);
    let b = forward(m - 1, rs.apply_adjoint(&a), rs, rt);
    backward(m - 1, rt.apply_adjoint(&b), rs, rt)
}

/// Number of `R_source` (and of `R_target`) applications in `U_depth`:
/// `(3^depth − 1)/2`.
pub fn reflections_in(depth: u32) -> u64 {
    (3u64.pow(depth) - 1) / 2
}

/// Fixed-point amplitude amplification.
///
/// `U₀ = I` and `U_{m+1} = U_m R_source U_m† R_target U_m`, where both
/// operators are selective `e^{iπ/3}` phase shifts about the source and
/// target states. Returns `U_depth |start⟩`. If `p = |⟨target|start⟩|²`
/// the result has overlap at least `1 − (1−p)^{3^depth}` with the target.
pub fn pi3_amplify(
    start: &QuantumSampleState,
    r_source: &dyn Operator,
    r_target: &dyn Operator,
    depth: u32,
) -> Result<QuantumSampleState> {
    if depth > MAX_AMPLIFY_DEPTH {
        return Err(Error::ResourceGuard(format!("amplification depth {depth} > {MAX_AMPLIFY_DEPTH}")));
    }
    for op in [r_source, r_target] {
        if op.dim() != start.len() {
            return Err(Error::DimensionMismatch { expected: start.len(), got: op.dim() });
        }
    }
    let out = forward(depth, start.amplitudes().clone(), r_source, r_target);
    QuantumSampleState::new(out)
}
