use super::kernel::WalkKernel;
use crate::qsearch::C64;
use nalgebra::{DMatrix, DVector};
use std::f64::consts::FRAC_1_SQRT_2;

/// Eigenvalues this close to `±1` give walk eigenphase zero.
const FIXED_TOL: f64 = 1e-12;

/// The walk restricted to its busy subspace, in its eigenbasis.
///
/// For `P = Σ λ_k v_k v_kᵀ` put `a_k = |v_k⟩|0⟩` and
/// `c_k = (V a_k − λ_k a_k)/√(1 − λ_k²)`. On `span{a_k, c_k}` the walk is
/// a rotation by `2θ_k` with `cos θ_k = λ_k`, whose eigenvectors
/// `ψ_± = (a_k ∓ i c_k)/√2` have eigenphases `±2θ_k`. Eigenvalues
/// `λ_k = ±1` leave `a_k` fixed.
///
/// Each row of the representation is one of these eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralWalk {
    lambdas: Vec<f64>,
    vectors: DMatrix<f64>,
    rows: Vec<(usize, i8)>,
    phases: Vec<f64>,
    phase_gap: f64,
}

impl SpectralWalk {
    pub fn from_kernel(k: &WalkKernel) -> Self {
        let eig = k.transition().clone().symmetric_eigen();
        let d = k.size();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let lambdas: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i].clamp(-1.0, 1.0)).collect();
        let vectors = DMatrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i)).collect::<Vec<_>>());
        let mut rows = Vec::with_capacity(2 * d);
        let mut phases = Vec::with_capacity(2 * d);
        let mut phase_gap = std::f64::consts::PI;
        for (k, &l) in lambdas.iter().enumerate() {
            if 1.0 - l.abs() <= FIXED_TOL {
                rows.push((k, 0));
                phases.push(0.0);
            } else {
                let phi = 2.0 * l.acos();
                rows.push((k, 1));
                phases.push(phi);
                rows.push((k, -1));
                phases.push(-phi);
                phase_gap = phase_gap.min(phi.min(2.0 * std::f64::consts::PI - phi));
            }
        }
        Self { lambdas, vectors, rows, phases, phase_gap }
    }

    /// Chain eigenvalues, decreasing.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// Eigenphase of each row.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn states(&self) -> usize {
        self.vectors.nrows()
    }

    /// `2 arccos(max |λ_k|)` over non-fixed `k`.
    pub fn phase_gap(&self) -> f64 {
        self.phase_gap
    }

    /// Coordinates of `Σ_x amp_x |x⟩|0⟩ ⊗ |0⟩_anc` with an ancilla of `B`
    /// levels; row `r` occupies entries `r·B .. (r+1)·B`.
    pub fn embed(&self, amp: &DVector<C64>, ancilla: usize) -> DVector<C64> {
        let coef = self.vectors.transpose().map(|x| C64::new(x, 0.0)) * amp;
        let mut out = DVector::<C64>::zeros(self.rows.len() * ancilla);
        for (r, &(k, s)) in self.rows.iter().enumerate() {
            out[r * ancilla] = if s == 0 { coef[k] } else { coef[k] * FRAC_1_SQRT_2 };
        }
        out
    }

    /// Amplitudes over the chain states of the component of `state` in
    /// `span{|x⟩|0⟩} ⊗ |0⟩_anc`.
    pub fn project(&self, state: &DVector<C64>, ancilla: usize) -> DVector<C64> {
        let mut coef = DVector::<C64>::zeros(self.states());
        for (r, &(k, s)) in self.rows.iter().enumerate() {
            let v = state[r * ancilla];
            coef[k] += if s == 0 { v } else { v * FRAC_1_SQRT_2 };
        }
        self.vectors.map(|x| C64::new(x, 0.0)) * coef
    }
}
