//! Maximum-margin homogeneous separator via Wolfe's minimum-norm-point
//! algorithm on the convex hull of the signed examples.

use super::{Dataset, RealVector};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Default duality-gap tolerance, in margin units.
pub const DEFAULT_MARGIN_TOL: f64 = 1e-9;

const WEIGHT_FLOOR: f64 = 1e-14;

/// Max-margin separator with the hull weights that witness it.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginCertificate {
    /// Unit-norm direction `u`.
    pub separator: RealVector,
    /// `γ`, the norm of the minimum-norm hull point.
    pub margin: f64,
    /// Convex weights over the examples; `Σ wᵢ yᵢ xᵢ = γ u`.
    pub hull_weights: Vec<f64>,
}

impl MarginCertificate {
    /// Smallest `uᵀ yᵢ xᵢ`, the margin the separator actually achieves.
    pub fn achieved_margin(&self, d: &Dataset) -> f64 {
        d.signed_examples()
            .iter()
            .map(|p| self.separator.dot(p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Minimum-norm point of `conv{yᵢ xᵢ}`.
///
/// Runs until `‖x‖ − minᵢ uᵀyᵢxᵢ ≤ tol` with `u = x/‖x‖`. Fails with
/// [`Error::Inseparable`] when the hull comes within `tol` of the origin.
pub fn max_margin(d: &Dataset, tol: f64) -> Result<MarginCertificate> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("margin tolerance must be positive".into()));
    }
    let pts = d.signed_examples();
    let n = pts.len();
    let start = (0..n)
        .min_by(|&i, &j| pts[i].norm_squared().total_cmp(&pts[j].norm_squared()))
        .expect("dataset is non-empty");

    let mut active: Vec<usize> = vec![start];
    let mut lambda: Vec<f64> = vec![1.0];
    let mut x = pts[start].clone();
    let max_major = 50 * (n + d.dim()) + 1000;

    for _ in 0..max_major {
        let norm = x.norm();
        if norm <= tol {
            return Err(Error::Inseparable { min_norm: norm });
        }
        let (j, best) = (0..n)
            .map(|i| (i, x.dot(&pts[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("dataset is non-empty");
        let gap = (x.norm_squared() - best) / norm;
        if gap <= tol || active.contains(&j) {
            return Ok(certificate(x, &active, &lambda, n));
        }
        active.push(j);
        lambda.push(0.0);

        // Minor cycles: move toward the affine minimizer of the active set,
        // dropping points whose weight reaches zero.
        loop {
            let alpha = affine_minimizer(pts, &active)?;
            if alpha.iter().all(|&a| a > WEIGHT_FLOOR) {
                lambda = alpha.iter().copied().collect();
                break;
            }
            let mut theta = 1.0f64;
            for (l, a) in lambda.iter().zip(alpha.iter()) {
                if *a <= WEIGHT_FLOOR {
                    let step = l / (l - a);
                    if step < theta {
                        theta = step;
                    }
                }
            }
            theta = theta.clamp(0.0, 1.0);
            for (l, a) in lambda.iter_mut().zip(alpha.iter()) {
                *l += theta * (a - *l);
            }
            let mut k = 0;
            while k < active.len() {
                if lambda[k] <= WEIGHT_FLOOR {
                    active.swap_remove(k);
                    lambda.swap_remove(k);
                } else {
                    k += 1;
                }
            }
            let s: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= s);
            if active.len() == 1 {
                lambda[0] = 1.0;
                break;
            }
        }
        x = combine(pts, &active, &lambda);
    }
    Err(Error::Numerical("minimum-norm-point iteration cap reached".into()))
}

fn combine(pts: &[RealVector], active: &[usize], lambda: &[f64]) -> RealVector {
    let mut x = RealVector::zeros(pts[0].len());
    for (&i, &l) in active.iter().zip(lambda) {
        x.axpy(l, &pts[i], 1.0);
    }
    x
}

/// Weights `α` (summing to 1) of the point of minimum norm in the affine
/// hull of the active points.
fn affine_minimizer(pts: &[RealVector], active: &[usize]) -> Result<DVector<f64>> {
    let k = active.len();
    let mut m = DMatrix::<f64>::zeros(k + 1, k + 1);
    for a in 0..k {
        for b in a..k {
            let g = pts[active[a]].dot(&pts[active[b]]);
            m[(a, b)] = g;
            m[(b, a)] = g;
        }
        m[(a, k)] = 1.0;
        m[(k, a)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = m
        .svd(true, true)
        .solve(&rhs, 1e-13)
        .map_err(|e| Error::Numerical(format!("affine minimizer: {e}")))?;
    let alpha = sol.rows(0, k).into_owned();
    let s = alpha.sum();
    if !s.is_finite() || s.abs() < 1e-300 {
        return Err(Error::Numerical("degenerate affine minimizer".into()));
    }
    Ok(alpha / s)
}

fn certificate(x: RealVector, active: &[usize], lambda: &[f64], n: usize) -> MarginCertificate {
    let margin = x.norm();
    let mut hull_weights = vec![0.0; n];
    for (&i, &l) in active.iter().zip(lambda) {
        hull_weights[i] = l;
    }
    MarginCertificate { separator: x / margin, margin, hull_weights }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::{mohri_hard_dataset, random_separable_dataset};
    use crate::geometry::{Label, LabeledExample};

    fn v(xs: &[f64]) -> RealVector {
        RealVector::from_column_slice(xs)
    }

    fn check_invariants(d: &Dataset, c: &MarginCertificate) {
        assert!((c.separator.norm() - 1.0).abs() <= 1e-9);
        assert!(c.margin > 0.0 && c.margin <= 1.0 + 1e-12);
        for p in d.signed_examples() {
            assert!(c.separator.dot(p) >= c.margin - 1e-7);
        }
        assert!(c.hull_weights.iter().all(|&w| w >= 0.0));
        assert!((c.hull_weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let mut hull = RealVector::zeros(d.dim());
        for (w, p) in c.hull_weights.iter().zip(d.signed_examples()) {
            hull.axpy(*w, p, 1.0);
        }
        assert!((hull.norm() - c.margin).abs() < 1e-7);
    }

    #[test]
    fn single_and_antipodal() {
        let one = Dataset::new(vec![LabeledExample::new(v(&[1.0, 0.0]), Label::Pos).unwrap()]).unwrap();
        let c = max_margin(&one, DEFAULT_MARGIN_TOL).unwrap();
        assert!((c.margin - 1.0).abs() < 1e-12);
        assert!((c.separator[0] - 1.0).abs() < 1e-12);
        let two = Dataset::new(vec![
            LabeledExample::new(v(&[1.0, 0.0]), Label::Pos).unwrap(),
            LabeledExample::new(v(&[-1.0, 0.0]), Label::Neg).unwrap(),
        ])
        .unwrap();
        let c = max_margin(&two, DEFAULT_MARGIN_TOL).unwrap();
        assert!((c.margin - 1.0).abs() < 1e-12);
        check_invariants(&two, &c);
    }

    #[test]
    fn mohri_two_matches_segment_grid_oracle() {
        let d = mohri_hard_dataset(2).unwrap();
        let c = max_margin(&d, DEFAULT_MARGIN_TOL).unwrap();
        // Independent oracle: scan the segment between the two signed points.
        let (p, q) = (v(&[1.0, 0.0]), v(&[-1.0, 1.0]) / 2f64.sqrt());
        let steps = 2_000_000;
        let best = (0..=steps)
            .map(|k| {
                let t = k as f64 / steps as f64;
                (&p * (1.0 - t) + &q * t).norm()
            })
            .fold(f64::INFINITY, f64::min);
        assert!((c.margin - best).abs() < 1e-9, "{} vs {}", c.margin, best);
        assert!((c.margin - (std::f64::consts::PI / 8.0).sin()).abs() < 1e-12);
        check_invariants(&d, &c);
    }

    #[test]
    fn rejects_inseparable() {
        let d = Dataset::new(vec![
            LabeledExample::new(v(&[1.0, 0.0]), Label::Pos).unwrap(),
            LabeledExample::new(v(&[1.0, 0.0]), Label::Neg).unwrap(),
        ])
        .unwrap();
        assert!(matches!(max_margin(&d, DEFAULT_MARGIN_TOL), Err(Error::Inseparable { .. })));
        let s = 0.5f64.sqrt();
        let ring = Dataset::new(vec![
            LabeledExample::new(v(&[1.0, 0.0, 0.0]), Label::Pos).unwrap(),
            LabeledExample::new(v(&[-s, s, 0.0]), Label::Pos).unwrap(),
            LabeledExample::new(v(&[-s, -s, 0.0]), Label::Pos).unwrap(),
        ])
        .unwrap();
        assert!(matches!(max_margin(&ring, DEFAULT_MARGIN_TOL), Err(Error::Inseparable { .. })));
    }

    #[test]
    fn certificates_hold_on_generated_data() {
        for seed in 0..40u64 {
            let dim = 2 + (seed as usize % 7);
            let d = random_separable_dataset(dim, 5 + seed as usize * 3, 0.05 + 0.01 * (seed % 10) as f64, seed)
                .unwrap();
            let c = max_margin(&d, DEFAULT_MARGIN_TOL).unwrap();
            check_invariants(&d, &c);
            assert!(c.achieved_margin(&d) >= c.margin - 1e-9);
        }
        for dim in 2..=12 {
            let d = mohri_hard_dataset(dim).unwrap();
            check_invariants(&d, &max_margin(&d, DEFAULT_MARGIN_TOL).unwrap());
        }
    }
}
