use super::grid::EpsilonGrid;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use rand::Rng;
use std::collections::VecDeque;

/// Symmetric (uniform-stationary) transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkKernel {
    grid: Option<EpsilonGrid>,
    transition: DMatrix<f64>,
}

/// Tolerance on row sums and symmetry.
pub const KERNEL_TOL: f64 = 1e-12;

impl WalkKernel {
    /// Wraps a transition matrix that is row-stochastic and symmetric.
    pub fn from_transition(transition: DMatrix<f64>) -> Result<Self> {
        let d = transition.nrows();
        if d == 0 || transition.ncols() != d {
            return Err(Error::InvalidArgument("transition matrix must be square and non-empty".into()));
        }
        for i in 0..d {
            let row: f64 = transition.row(i).sum();
            if (row - 1.0).abs() > KERNEL_TOL {
                return Err(Error::InvalidArgument(format!("row {i} sums to {row}")));
            }
            for j in 0..d {
                let p = transition[(i, j)];
                if !(p >= 0.0) || (p - transition[(j, i)]).abs() > KERNEL_TOL {
                    return Err(Error::InvalidArgument("transition matrix must be nonnegative and symmetric".into()));
                }
            }
        }
        Ok(Self { grid: None, transition })
    }

    pub fn grid(&self) -> Option<&EpsilonGrid> {
        self.grid.as_ref()
    }

    pub fn transition(&self) -> &DMatrix<f64> {
        &self.transition
    }

    pub fn size(&self) -> usize {
        self.transition.nrows()
    }

    /// A random connected symmetric kernel on `d` states with holding
    /// probability at least `laziness` everywhere.
    pub fn random<R: Rng + ?Sized>(d: usize, laziness: f64, rng: &mut R) -> Result<Self> {
        if d == 0 || !(0.0..1.0).contains(&laziness) {
            return Err(Error::InvalidArgument("random kernels need d ≥ 1 and laziness in [0,1)".into()));
        }
        let mut w = DMatrix::<f64>::zeros(d, d);
        for i in 0..d {
            for j in i + 1..d {
                let edge = j == i + 1 || rng.random::<f64>() < 0.4;
                if edge {
                    let x = 0.05 + rng.random::<f64>();
                    w[(i, j)] = x;
                    w[(j, i)] = x;
                }
            }
        }
        let max_row = (0..d).map(|i| w.row(i).sum()).fold(0.0, f64::max).max(1e-300);
        let mut p = w * ((1.0 - laziness) / max_row);
        for i in 0..d {
            p[(i, i)] = 0.0;
            p[(i, i)] = 1.0 - p.row(i).sum();
        }
        Self::from_transition(p)
    }

    /// Eigenvalues of `P` in decreasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.transition.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// `δ(P) = 1 − max_{k≥2} |λ_k|`.
    pub fn spectral_gap(&self) -> f64 {
        let ev = self.eigenvalues();
        let slem = ev.iter().skip(1).map(|l| l.abs()).fold(0.0, f64::max);
        1.0 - slem
    }
}

/// Lazy Metropolis walk on the grid, uniform-stationary.
///
/// From each point the walk stays with probability `laziness`; otherwise
/// it proposes one of the `2D` lattice neighbours uniformly and moves only
/// if the neighbour is in the grid.
pub fn build_kernel(g: &EpsilonGrid, laziness: f64) -> Result<WalkKernel> {
    if !(0.0..1.0).contains(&laziness) {
        return Err(Error::InvalidArgument(format!("laziness must lie in [0,1), got {laziness}")));
    }
    let d = g.len();
    let step = (1.0 - laziness) / (2 * g.dim()) as f64;
    let mut p = DMatrix::<f64>::zeros(d, d);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); d];
    for (i, c) in g.coords().iter().enumerate() {
        let mut n = c.clone();
        for axis in 0..g.dim() {
            for delta in [-1, 1] {
                n[axis] += delta;
                if let Some(j) = g.index_of(&n) {
                    p[(i, j)] = step;
                    adj[i].push(j);
                }
                n[axis] -= delta;
            }
        }
        p[(i, i)] = 1.0 - step * adj[i].len() as f64;
    }
    let mut seen = vec![false; d];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Disconnected);
    }
    Ok(WalkKernel { grid: Some(g.clone()), transition: p })
}
