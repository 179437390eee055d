use super::{check_margin_args, find_mistake, retries_for, verify, BlackBox, SolveReport, SolveTrace};
use crate::error::{Error, Result};
use crate::geometry::{check_dims, Dataset, Hyperplane, RealVector};
use crate::ledger::QueryLedger;
use crate::rng::stream;
use nalgebra::DMatrix;

/// Ellipsoid `{v : (v − w)ᵀ A⁻¹ (v − w) ≤ 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidState {
    pub center: RealVector,
    pub shape: DMatrix<f64>,
}

/// Smallest eigenvalue tolerated in the shape matrix.
const MIN_EIGENVALUE: f64 = 1e-12;

impl EllipsoidState {
    /// The unit ball in dimension `dim ≥ 2`.
    pub fn unit_ball(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidArgument("the ellipsoid method needs D ≥ 2".into()));
        }
        Ok(Self { center: RealVector::zeros(dim), shape: DMatrix::identity(dim, dim) })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Replaces the ellipsoid by the smallest one containing its half
    /// `{v : (v − w)ᵀ g ≥ 0}`:
    /// `b = Ag/√(gᵀAg)`, `w ← w + b/(D+1)`,
    /// `A ← D²/(D²−1) (A − 2/(D+1) bbᵀ)`.
    ///
    /// Returns the volume ratio `√(det A_new / det A_old)`.
    pub fn update(&mut self, g: &RealVector) -> Result<f64> {
        check_dims(self.dim(), g.len())?;
        let d = self.dim() as f64;
        let ag = &self.shape * g;
        let gag = g.dot(&ag);
        if !(gag > 0.0) {
            return Err(Error::Numerical(format!("degenerate cut: gᵀAg = {gag}")));
        }
        let b = ag / gag.sqrt();
        let det_old = self.shape.determinant();
        self.center += &b / (d + 1.0);
        let mut a = &self.shape - (&b * b.transpose()) * (2.0 / (d + 1.0));
        a *= d * d / (d * d - 1.0);
        let sym = (&a + a.transpose()) * 0.5;
        let min_eig = sym.clone().symmetric_eigen().eigenvalues.min();
        if min_eig <= MIN_EIGENVALUE {
            return Err(Error::Numerical(format!(
                "ellipsoid shape lost positive definiteness (min eigenvalue {min_eig:.3e})"
            )));
        }
        self.shape = sym;
        Ok((self.shape.determinant() / det_old).sqrt())
    }

    pub fn contains(&self, v: &RealVector) -> bool {
        let dv = v - &self.center;
        match self.shape.clone().cholesky() {
            Some(ch) => dv.dot(&ch.solve(&dv)) <= 1.0 + 1e-12,
            None => false,
        }
    }
}

/// `⌈2D² ln(D/γ_lb)⌉`.
pub fn ellipsoid_rounds(dim: usize, gamma_lb: f64) -> u64 {
    let d = dim as f64;
    (2.0 * d * d * (d / gamma_lb).ln()).ceil().max(1.0) as u64
}

/// Online ellipsoid method.
///
/// Starts from the unit ball and runs at most `r = ⌈2D² ln(D/γ_lb)⌉`
/// rounds. Each round checks the center against the data, then makes up
/// to `⌈log_{3/4}(ε/r)⌉` black-box attempts and applies the central-cut
/// update for the first mistake found.
pub fn ellipsoid_solve(d: &Dataset, gamma_lb: f64, epsilon: f64, bb: BlackBox, seed: u64) -> Result<SolveReport> {
    check_margin_args(gamma_lb, epsilon)?;
    let mut state = EllipsoidState::unit_ball(d.dim())?;
    let max_rounds = ellipsoid_rounds(d.dim(), gamma_lb);
    let attempts = retries_for(epsilon / max_rounds as f64);
    let dim = d.dim() as u64;
    let mut rng = stream(seed);
    let mut ledger = QueryLedger::new();
    let mut trace = SolveTrace::default();
    let mut trajectory = Vec::new();
    let mut rounds = 0;
    let mut converged = false;
    while rounds < max_rounds {
        trajectory.push(state.center.clone());
        if verify(d, &state.center, &mut ledger) {
            converged = true;
            break;
        }
        rounds += 1;
        if let Some(i) = find_mistake(d, &state.center, bb, attempts, &mut rng, &mut ledger) {
            let ratio = state.update(d.signed_example(i))?;
            ledger.arithmetic_ops += 3 * dim * dim;
            trace.mistakes.push(i);
            trace.volume_ratios.push(ratio);
        }
    }
    if !converged {
        converged = verify(d, &state.center, &mut ledger);
    }
    Ok(SolveReport {
        solution: Hyperplane::from(state.center),
        rounds,
        updates: trace.mistakes.len() as u64,
        ledger,
        converged,
        trajectory: Some(trajectory),
        trace,
    })
}
