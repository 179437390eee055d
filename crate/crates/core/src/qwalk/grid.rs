use crate::error::{Error, Result};
use crate::geometry::RealVector;
use crate::solvers::CutPolytope;
use std::collections::HashMap;

/// Largest lattice enumerated by [`discretize`], in candidate points.
pub const GRID_CANDIDATE_LIMIT: f64 = 1e4;

/// Lattice points of spacing `ε` inside a cut polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonGrid {
    spacing: f64,
    dim: usize,
    coords: Vec<Vec<i64>>,
    points: Vec<RealVector>,
    index: HashMap<Vec<i64>, usize>,
    candidates: u64,
}

impl EpsilonGrid {
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[RealVector] {
        &self.points
    }

    /// Integer lattice coordinates of each point.
    pub fn coords(&self) -> &[Vec<i64>] {
        &self.coords
    }

    pub fn index_of(&self, coord: &[i64]) -> Option<usize> {
        self.index.get(coord).copied()
    }

    /// Number of lattice sites tested for membership during enumeration.
    pub fn candidates(&self) -> u64 {
        self.candidates
    }

    /// Indices (in `self`) of the points of `other`, which must be a subset.
    pub fn embed(&self, other: &EpsilonGrid) -> Result<Vec<usize>> {
        other
            .coords
            .iter()
            .map(|c| {
                self.index_of(c)
                    .ok_or_else(|| Error::InvalidArgument("grid is not a subset of the reference grid".into()))
            })
            .collect()
    }
}

/// Enumerates the lattice `(εZ)^D` inside `p`, in lexicographic order.
///
/// Limited to `D ≤ 3` and `(2/ε)^D ≤ 10⁴` candidates.
pub fn discretize(p: &CutPolytope, spacing: f64) -> Result<EpsilonGrid> {
    let dim = p.dim();
    if !(spacing > 0.0 && spacing <= 2.0) {
        return Err(Error::InvalidArgument(format!("grid spacing must lie in (0, 2], got {spacing}")));
    }
    if dim == 0 || dim > 3 || (2.0 / spacing).powi(dim as i32) > GRID_CANDIDATE_LIMIT {
        return Err(Error::ResourceGuard(format!(
            "grid with D={dim}, spacing {spacing} exceeds the desk-scale limit"
        )));
    }
    let k = (1.0 / spacing + 1e-9).floor() as i64;
    let mut coords = Vec::new();
    let mut points = Vec::new();
    let mut index = HashMap::new();
    let mut cur = vec![-k; dim];
    let mut candidates = 0u64;
    loop {
        candidates += 1;
        let x = RealVector::from_iterator(dim, cur.iter().map(|&c| c as f64 * spacing));
        if p.contains(&x) {
            index.insert(cur.clone(), points.len());
            coords.push(cur.clone());
            points.push(x);
        }
        let mut axis = dim;
        loop {
            if axis == 0 {
                if points.is_empty() {
                    return Err(Error::EmptyGrid(format!("no lattice point of spacing {spacing} is feasible")));
                }
                return Ok(EpsilonGrid { spacing, dim, coords, points, index, candidates });
            }
            axis -= 1;
            if cur[axis] < k {
                cur[axis] += 1;
                for c in cur.iter_mut().skip(axis + 1) {
                    *c = -k;
                }
                break;
            }
        }
    }
}

/// `|⟨π_prev|π_next⟩|² = |Ω_next| / |Ω_prev|` for uniform samples over the
/// two grids, where `next` refines `prev` by more cuts.
pub fn overlap_lower_bound_check(prev: &CutPolytope, next: &CutPolytope, spacing: f64) -> Result<f64> {
    let a = discretize(prev, spacing)?;
    let b = discretize(next, spacing)?;
    let shared = b.coords.iter().filter(|c| a.index_of(c).is_some()).count();
    Ok((shared * shared) as f64 / (a.len() * b.len()) as f64)
}
