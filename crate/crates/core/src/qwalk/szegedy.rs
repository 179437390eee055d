use super::kernel::WalkKernel;
use crate::error::{Error, Result};
use crate::qsearch::C64;
use nalgebra::linalg::Schur;
use nalgebra::{DMatrix, DVector};

/// Largest `d²` accepted by [`build_szegedy`].
pub const SZEGEDY_DIM_LIMIT: usize = 1024;

/// Phases closer to zero than this count as fixed points.
pub const PHASE_ZERO_TOL: f64 = 1e-7;

/// Choice of the orthonormal completion of the state-preparation blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Completion {
    #[default]
    Householder,
    GramSchmidt,
}

/// Dense walk operator `W = V R V R` on `C^d ⊗ C^d`, with `V = U†SU`,
/// `S` the register swap, `R` the reflection about `span{|x⟩|0⟩}` and
/// `U|x⟩|0⟩ = |x⟩ Σ_y √p_xy |y⟩`.
///
/// Basis index of `|x⟩|y⟩` is `x·d + y`.
#[derive(Debug, Clone)]
pub struct SzegedyWalk {
    kernel: WalkKernel,
    prep: DMatrix<f64>,
    unitary: DMatrix<f64>,
    eigenvectors: DMatrix<C64>,
    eigenphases: Vec<f64>,
    phase_gap: f64,
}

fn householder_block(s: &DVector<f64>) -> DMatrix<f64> {
    let d = s.len();
    let mut v = -s.clone();
    v[0] += 1.0;
    let vv = v.norm_squared();
    if vv < 1e-28 {
        return DMatrix::identity(d, d);
    }
    DMatrix::identity(d, d) - (&v * v.transpose()) * (2.0 / vv)
}

fn gram_schmidt_block(s: &DVector<f64>) -> Result<DMatrix<f64>> {
    let d = s.len();
    let mut cols: Vec<DVector<f64>> = vec![s.clone()];
    for k in 0..d {
        if cols.len() == d {
            break;
        }
        let mut e = DVector::<f64>::zeros(d);
        e[k] = 1.0;
        for _ in 0..2 {
            for c in &cols {
                let proj = c.dot(&e);
                e.axpy(-proj, c, 1.0);
            }
        }
        let n = e.norm();
        if n > 1e-8 {
            cols.push(e / n);
        }
    }
    if cols.len() != d {
        return Err(Error::Numerical("unitary completion failed".into()));
    }
    Ok(DMatrix::from_columns(&cols))
}

/// Builds the dense walk for `k` with the given completion of `U`.
pub fn build_szegedy_with(k: &WalkKernel, completion: Completion) -> Result<SzegedyWalk> {
    let d = k.size();
    let n = d * d;
    if n > SZEGEDY_DIM_LIMIT {
        return Err(Error::ResourceGuard(format!("d² = {n} exceeds {SZEGEDY_DIM_LIMIT}")));
    }
    let p = k.transition();
    let mut prep = DMatrix::<f64>::zeros(n, n);
    for x in 0..d {
        let s = DVector::from_iterator(d, (0..d).map(|y| p[(x, y)].sqrt()));
        let s = &s / s.norm();
        let block = match completion {
            Completion::Householder => householder_block(&s),
            Completion::GramSchmidt => gram_schmidt_block(&s)?,
        };
        prep.view_mut((x * d, x * d), (d, d)).copy_from(&block);
    }
    let mut swap = DMatrix::<f64>::zeros(n, n);
    for x in 0..d {
        for y in 0..d {
            swap[(y * d + x, x * d + y)] = 1.0;
        }
    }
    let reflect = DMatrix::from_diagonal(&DVector::from_fn(n, |i, _| if i % d == 0 { 1.0 } else { -1.0 }));
    let v = prep.transpose() * &swap * &prep;
    let vr = &v * &reflect;
    let unitary = &vr * &vr;

    let schur = Schur::try_new(unitary.map(|x| C64::new(x, 0.0)), 1e-14, 10_000)
        .ok_or_else(|| Error::Numerical("Schur decomposition of the walk did not converge".into()))?;
    let (q, t) = schur.unpack();
    let eigenphases: Vec<f64> = (0..n).map(|i| t[(i, i)].arg()).collect();
    let phase_gap = eigenphases
        .iter()
        .map(|f| f.abs())
        .filter(|&f| f > PHASE_ZERO_TOL)
        .fold(std::f64::consts::PI, f64::min);
    Ok(SzegedyWalk { kernel: k.clone(), prep, unitary, eigenvectors: q, eigenphases, phase_gap })
}

/// [`build_szegedy_with`] using the Householder completion.
pub fn build_szegedy(k: &WalkKernel) -> Result<SzegedyWalk> {
    build_szegedy_with(k, Completion::Householder)
}

impl SzegedyWalk {
    pub fn kernel(&self) -> &WalkKernel {
        &self.kernel
    }

    /// `d`, the number of states of the chain.
    pub fn states(&self) -> usize {
        self.kernel.size()
    }

    /// `d²`.
    pub fn dim(&self) -> usize {
        self.unitary.nrows()
    }

    /// `W` (real orthogonal).
    pub fn unitary(&self) -> &DMatrix<f64> {
        &self.unitary
    }

    /// The state-preparation unitary `U`.
    pub fn preparation(&self) -> &DMatrix<f64> {
        &self.prep
    }

    /// Orthonormal eigenvectors of `W`, as columns.
    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    /// Eigenphases in `(−π, π]`, matching the columns of `eigenvectors`.
    pub fn eigenphases(&self) -> &[f64] {
        &self.eigenphases
    }

    /// Smallest nonzero `|phase|` of `W`.
    pub fn phase_gap(&self) -> f64 {
        self.phase_gap
    }

    /// `|π⟩|0⟩` for the uniform stationary distribution.
    pub fn stationary_state(&self) -> DVector<f64> {
        let d = self.states();
        let amp = 1.0 / (d as f64).sqrt();
        DVector::from_fn(d * d, |i, _| if i % d == 0 { amp } else { 0.0 })
    }

    /// `‖WᵀW − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        (self.unitary.transpose() * &self.unitary - DMatrix::<f64>::identity(n, n)).amax()
    }

    /// `‖W|π⟩|0⟩ − |π⟩|0⟩‖`.
    pub fn stationarity_residual(&self) -> f64 {
        let pi = self.stationary_state();
        (&self.unitary * &pi - pi).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qwalk::{build_kernel, discretize};
    use crate::rng::stream;
    use crate::solvers::{Cut, CutPolytope};
    use crate::geometry::RealVector;

    fn two_node() -> WalkKernel {
        let mut p = CutPolytope::new(1);
        p.push(Cut::new(RealVector::from_element(1, 1.0), RealVector::from_element(1, 0.2)).unwrap())
            .unwrap();
        build_kernel(&discretize(&p, 0.5).unwrap(), 0.0).unwrap()
    }

    #[test]
    fn two_node_chain_phase_gap() {
        let w = build_szegedy(&two_node()).unwrap();
        assert!((w.phase_gap() - std::f64::consts::PI).abs() < 1e-12);
        assert!(w.eigenphases().iter().any(|f| (f.abs() - std::f64::consts::PI).abs() < 1e-9));
        assert!(w.unitarity_residual() < 1e-12);
        assert!(w.stationarity_residual() < 1e-12);
    }

    #[test]
    fn random_kernels_satisfy_invariants() {
        let mut rng = stream(4);
        for trial in 0..20 {
            let d = 2 + trial % 15;
            let k = WalkKernel::random(d, 0.2, &mut rng).unwrap();
            let delta = k.spectral_gap();
            for c in [Completion::Householder, Completion::GramSchmidt] {
                let w = build_szegedy_with(&k, c).unwrap();
                assert!(w.unitarity_residual() <= 1e-10);
                assert!(w.stationarity_residual() <= 1e-10);
                assert!(w.phase_gap() >= 2.0 * delta.sqrt() - 1e-9, "d={d}");
                let slem = k.eigenvalues().iter().skip(1).map(|l| l.abs()).fold(0.0, f64::max);
                assert!((w.phase_gap() - 2.0 * slem.acos()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn completions_agree_on_invariants() {
        let g = discretize(&CutPolytope::new(2), 0.5).unwrap();
        let k = build_kernel(&g, 0.5).unwrap();
        let a = build_szegedy_with(&k, Completion::Householder).unwrap();
        let b = build_szegedy_with(&k, Completion::GramSchmidt).unwrap();
        assert!((a.phase_gap() - b.phase_gap()).abs() < 1e-9);
        let nonzero = |w: &SzegedyWalk| {
            let mut v: Vec<f64> = w.eigenphases().iter().copied().filter(|f| f.abs() > PHASE_ZERO_TOL).collect();
            v.sort_by(f64::total_cmp);
            v
        };
        let (pa, pb) = (nonzero(&a), nonzero(&b));
        assert_eq!(pa.len(), pb.len());
        assert!(pa.iter().zip(&pb).all(|(x, y)| (x - y).abs() < 1e-8));
        assert!((a.preparation() - b.preparation()).amax() > 1e-3);
    }

    #[test]
    fn guard_rejects_large_chains() {
        let g = discretize(&CutPolytope::new(2), 0.1).unwrap();
        let k = build_kernel(&g, 0.5).unwrap();
        assert!(matches!(build_szegedy(&k), Err(Error::ResourceGuard(_))));
    }
}
