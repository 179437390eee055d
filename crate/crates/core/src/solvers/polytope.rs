use crate::error::{Error, Result};
use crate::geometry::{check_dims, RealVector};
use crate::ledger::QueryLedger;
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

/// Half-space `{w : (w − anchor)ᵀ direction > 0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub direction: RealVector,
    pub anchor: RealVector,
}

impl Cut {
    pub fn new(direction: RealVector, anchor: RealVector) -> Result<Self> {
        check_dims(direction.len(), anchor.len())?;
        Ok(Self { direction, anchor })
    }

    pub fn admits(&self, w: &RealVector) -> bool {
        (w - &self.anchor).dot(&self.direction) > 0.0
    }
}

/// How a membership query is charged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostModel {
    /// One arithmetic operation per constraint, `t + 1` in total.
    #[default]
    Classical,
    /// `⌈√(t+1)⌉` quantum queries.
    Quantum,
}

/// The unit ball intersected with accumulated cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct CutPolytope {
    dim: usize,
    cuts: Vec<Cut>,
}

/// Slack on the ball constraint.
const BALL_SLACK: f64 = 1e-12;

impl CutPolytope {
    pub fn new(dim: usize) -> Self {
        Self { dim, cuts: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn push(&mut self, cut: Cut) -> Result<()> {
        check_dims(self.dim, cut.direction.len())?;
        self.cuts.push(cut);
        Ok(())
    }

    /// Uncharged membership test.
    pub fn contains(&self, w: &RealVector) -> bool {
        w.norm_squared() <= 1.0 + BALL_SLACK && self.cuts.iter().all(|c| c.admits(w))
    }

    /// Membership test charged to `ledger` under `model`.
    pub fn membership(&self, w: &RealVector, ledger: &mut QueryLedger, model: CostModel) -> Result<bool> {
        check_dims(self.dim, w.len())?;
        let terms = self.cuts.len() as u64 + 1;
        ledger.membership_queries += 1;
        match model {
            CostModel::Classical => ledger.arithmetic_ops += terms,
            CostModel::Quantum => ledger.quantum_queries += (terms as f64).sqrt().ceil() as u64,
        }
        Ok(self.contains(w))
    }
}

/// Classically charged membership of `w` in `p`.
pub fn membership(w: &RealVector, p: &CutPolytope, ledger: &mut QueryLedger) -> Result<bool> {
    p.membership(w, ledger, CostModel::Classical)
}

/// Uniform point in the unit ball of dimension `dim`.
pub fn sample_unit_ball<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> RealVector {
    loop {
        let g = RealVector::from_fn(dim, |_, _| rng.sample(StandardNormal));
        let n = g.norm();
        if n > 1e-12 {
            let r = rng.random::<f64>().powf(1.0 / dim as f64);
            return g * (r / n);
        }
    }
}

/// Largest `t ∈ [0, 2/‖dir‖]` found by bisection with `w + t·dir` inside,
/// to within `tol` in distance.
fn chord_end(
    w: &RealVector,
    dir: &RealVector,
    p: &CutPolytope,
    tol: f64,
    ledger: &mut QueryLedger,
    model: CostModel,
) -> Result<f64> {
    let len = dir.norm();
    let (mut lo, mut hi) = (0.0, 2.0 / len);
    while (hi - lo) * len > tol {
        let mid = 0.5 * (lo + hi);
        if p.membership(&(w + dir * mid), ledger, model)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// One hit-and-run move from `w` along `dir`: both chord ends are located
/// by bisection to within `tol` (each end returned on the feasible side)
/// and a uniform point of the chord is returned.
pub fn hit_and_run_along<R: Rng + ?Sized>(
    w: &RealVector,
    dir: &RealVector,
    p: &CutPolytope,
    tol: f64,
    rng: &mut R,
    ledger: &mut QueryLedger,
    model: CostModel,
) -> Result<RealVector> {
    check_dims(p.dim(), w.len())?;
    check_dims(p.dim(), dir.len())?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("bisection tolerance must be positive".into()));
    }
    if !p.membership(w, ledger, model)? {
        return Err(Error::InvalidArgument("hit-and-run start point is infeasible".into()));
    }
    if dir.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let fwd = chord_end(w, dir, p, tol, ledger, model)?;
    let back = chord_end(w, &-dir, p, tol, ledger, model)?;
    let t = rng.random_range(-back..=fwd);
    Ok(w + dir * t)
}

/// [`hit_and_run_along`] in a uniformly random direction.
pub fn hit_and_run_step<R: Rng + ?Sized>(
    w: &RealVector,
    p: &CutPolytope,
    tol: f64,
    rng: &mut R,
    ledger: &mut QueryLedger,
) -> Result<RealVector> {
    let dir = loop {
        let g = RealVector::from_fn(p.dim(), |_, _| rng.sample(StandardNormal));
        let n = g.norm();
        if n > 1e-12 {
            break g / n;
        }
    };
    hit_and_run_along(w, &dir, p, tol, rng, ledger, CostModel::Classical)
}

/// The whitening map `S = C^{−1/2}` and its inverse `L = C^{1/2}` for
/// `C = mean[(x − z)(x − z)ᵀ] + ridge·I`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub center: RealVector,
    pub whiten: DMatrix<f64>,
    pub unwhiten: DMatrix<f64>,
}

impl AffineMap {
    pub fn identity(center: RealVector) -> Self {
        let d = center.len();
        Self { center, whiten: DMatrix::identity(d, d), unwhiten: DMatrix::identity(d, d) }
    }

    pub fn from_points(points: &[RealVector], z: &RealVector, ridge: f64) -> Result<Self> {
        let d = z.len();
        if points.len() < d + 1 {
            return Err(Error::InvalidArgument(format!(
                "affine transform needs at least D+1 = {} points, got {}",
                d + 1,
                points.len()
            )));
        }
        if !(ridge >= 0.0) {
            return Err(Error::InvalidArgument("ridge must be nonnegative".into()));
        }
        let mut c = DMatrix::<f64>::zeros(d, d);
        for x in points {
            check_dims(d, x.len())?;
            let dx = x - z;
            c.ger(1.0, &dx, &dx, 1.0);
        }
        c /= points.len() as f64;
        for i in 0..d {
            c[(i, i)] += ridge;
        }
        let eig = c.symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::Numerical("second-moment matrix is not positive definite".into()));
        }
        let q = &eig.eigenvectors;
        let scaled = |f: &dyn Fn(f64) -> f64| {
            let diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f));
            q * diag * q.transpose()
        };
        Ok(Self {
            center: z.clone(),
            whiten: scaled(&|l: f64| 1.0 / l.sqrt()),
            unwhiten: scaled(&|l: f64| l.sqrt()),
        })
    }

    /// `S(x − z)`.
    pub fn apply(&self, x: &RealVector) -> RealVector {
        &self.whiten * (x - &self.center)
    }

    /// `z + L y`.
    pub fn pull_back(&self, y: &RealVector) -> RealVector {
        &self.unwhiten * y + &self.center
    }
}

/// `C^{−1/2}` for `C = mean[(x − z)(x − z)ᵀ] + ridge·I`.
pub fn affine_transform_from_points(points: &[RealVector], z: &RealVector, ridge: f64) -> Result<DMatrix<f64>> {
    Ok(AffineMap::from_points(points, z, ridge)?.whiten)
}
