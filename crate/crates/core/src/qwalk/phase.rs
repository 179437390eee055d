use super::state::{omega, Operator};
use super::szegedy::{SzegedyWalk, PHASE_ZERO_TOL};
use crate::error::{Error, Result};
use crate::qsearch::{fejer_kernel, C64};
use nalgebra::{DMatrix, DVector};

/// Largest ancilla register accepted.
pub const MAX_ANCILLA_BITS: u32 = 12;
/// Largest `d²·2^bits` accepted by [`approx_reflection_phase_estimation`].
pub const REFLECTION_SIZE_LIMIT: usize = 1_000_000;

/// In-place unnormalized Walsh–Hadamard transform.
pub fn fwht(v: &mut [C64]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// `V†|0⟩` on the ancilla for eigenphase `phi`, where `V` is the
/// phase-estimation circuit with `bits` ancilla qubits:
/// `u_n = (1/B) Σ_k (−1)^{n·k} e^{−ikφ}`, `B = 2^bits`.
///
/// `|⟨0|u⟩|²` is the Fejér kernel `F_B(φ)`.
pub fn ancilla_vector(phi: f64, bits: u32) -> DVector<C64> {
    let b = 1usize << bits;
    let mut v: Vec<C64> = (0..b).map(|k| C64::from_polar(1.0, -(k as f64) * phi)).collect();
    fwht(&mut v);
    DVector::from_vec(v).unscale(b as f64)
}

/// Leakage envelope `min(1, 1/(B² sin²(Δ/2)))`: an upper bound on the
/// probability that phase estimation reads `0` for any phase at least `Δ`
/// away from zero.
pub fn leakage_envelope(phase_gap: f64, bits: u32) -> f64 {
    let b = (1u64 << bits) as f64;
    let s = (phase_gap / 2.0).sin();
    (1.0 / (b * b * s * s)).min(1.0)
}

/// Approximate selective phase shift `Σ_j |e_j⟩⟨e_j| ⊗ (I + (ω−1)|u_j⟩⟨u_j|)`
/// over the eigenvectors `e_j` of a walk, with `u_j = V†|0⟩` for phase
/// `φ_j` and `ω = e^{iπ/3}`.
///
/// On phase-zero eigenvectors it is exactly the `ω` phase shift; on the
/// others it differs from the identity by `√F_B(φ_j)` in norm. States are
/// laid out as `index·B + ancilla`.
#[derive(Debug, Clone)]
pub struct PhaseReflection {
    basis: Option<DMatrix<C64>>,
    phases: Vec<f64>,
    ancillas: Vec<DVector<C64>>,
    bits: u32,
    /// Reported leakage `ε₂`; see [`leakage_envelope`].
    pub epsilon2: f64,
    /// `max √F_B(φ_j)` over nonzero phases: the norm of the deviation from
    /// the exact reflection on (walk space) ⊗ `|0⟩`.
    pub measured_error: f64,
}

impl PhaseReflection {
    /// Reflection whose input is already expressed in the eigenbasis, one
    /// row per eigenphase.
    pub fn in_eigenbasis(phases: Vec<f64>, phase_gap: f64, bits: u32) -> Result<Self> {
        Self::build(None, phases, phase_gap, bits)
    }

    fn build(basis: Option<DMatrix<C64>>, phases: Vec<f64>, phase_gap: f64, bits: u32) -> Result<Self> {
        if bits > MAX_ANCILLA_BITS {
            return Err(Error::ResourceGuard(format!("ancilla bits {bits} > {MAX_ANCILLA_BITS}")));
        }
        let ancillas: Vec<DVector<C64>> = phases.iter().map(|&p| ancilla_vector(p, bits)).collect();
        let b = (1u64 << bits) as f64;
        let measured_error = phases
            .iter()
            .filter(|p| p.abs() > PHASE_ZERO_TOL)
            .map(|&p| fejer_kernel(b, p).sqrt())
            .fold(0.0, f64::max);
        Ok(Self { basis, phases, ancillas, bits, epsilon2: leakage_envelope(phase_gap, bits), measured_error })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn ancilla_size(&self) -> usize {
        1 << self.bits
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    fn act(&self, v: &DVector<C64>, phase: C64) -> DVector<C64> {
        let b = self.ancilla_size();
        let n = self.phases.len();
        assert_eq!(v.len(), n * b, "operator dimension mismatch");
        let x = DMatrix::from_row_slice(n, b, v.as_slice());
        let mut y = match &self.basis {
            Some(q) => q.adjoint() * x,
            None => x,
        };
        let shift = phase - C64::new(1.0, 0.0);
        for (j, u) in self.ancillas.iter().enumerate() {
            let mut row = y.row_mut(j);
            let coef: C64 = u.iter().zip(row.iter()).map(|(a, r)| a.conj() * r).sum::<C64>() * shift;
            for (r, a) in row.iter_mut().zip(u.iter()) {
                *r += coef * a;
            }
        }
        let out = match &self.basis {
            Some(q) => q * y,
            None => y,
        };
        DVector::from_iterator(n * b, out.transpose().iter().copied())
    }
}

impl Operator for PhaseReflection {
    fn dim(&self) -> usize {
        self.phases.len() * self.ancilla_size()
    }

    fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        self.act(v, omega())
    }

    fn apply_adjoint(&self, v: &DVector<C64>) -> DVector<C64> {
        self.act(v, omega().conj())
    }
}

/// Approximate reflection about the stationary state of `w` built from
/// simulated phase estimation with `ancilla_bits` qubits.
pub fn approx_reflection_phase_estimation(w: &SzegedyWalk, ancilla_bits: u32) -> Result<PhaseReflection> {
    if ancilla_bits > MAX_ANCILLA_BITS {
        return Err(Error::ResourceGuard(format!("ancilla bits {ancilla_bits} > {MAX_ANCILLA_BITS}")));
    }
    let size = w.dim().saturating_mul(1 << ancilla_bits);
    if size > REFLECTION_SIZE_LIMIT {
        return Err(Error::ResourceGuard(format!("d²·2^bits = {size} exceeds {REFLECTION_SIZE_LIMIT}")));
    }
    PhaseReflection::build(
        Some(w.eigenvectors().clone()),
        w.eigenphases().to_vec(),
        w.phase_gap(),
        ancilla_bits,
    )
}

/// `|s⟩ ⊗ |0⟩` on an ancilla of `2^bits` levels.
pub fn with_zero_ancilla(s: &DVector<C64>, bits: u32) -> DVector<C64> {
    let b = 1usize << bits;
    let mut out = DVector::<C64>::zeros(s.len() * b);
    for (i, a) in s.iter().enumerate() {
        out[i * b] = *a;
    }
    out
}
