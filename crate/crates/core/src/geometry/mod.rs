//! Vectors, labeled data and classification semantics.
//!
//! A hyperplane `w` labels `x` with `+1` iff `wᵀx > 0`; a zero dot product
//! counts as `-1`. An example is misclassified iff `wᵀx·y ≤ 0`, and the
//! version space is the open cone where no example is misclassified.

mod beta;
mod margin;
mod probability;

pub use beta::{ln_beta, regularized_incomplete_beta};
pub use margin::{max_margin, MarginCertificate, DEFAULT_MARGIN_TOL};
pub use probability::{
    asymptotic_lower_bound, mc_version_space_probability, required_sample_count,
    sector_probability, BoundRegime, McEstimate,
};

use crate::error::{Error, Result};
use nalgebra::DVector;
use std::sync::OnceLock;

/// Real vector with finite entries and at least one component.
pub type RealVector = DVector<f64>;

/// Tolerance on `‖x‖ = 1` for stored examples.
pub const UNIT_NORM_TOL: f64 = 1e-9;

pub(crate) fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

pub(crate) fn check_finite(v: &RealVector) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidArgument("vector must have dim ≥ 1".into()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("vector has non-finite entries".into()));
    }
    Ok(())
}

/// Class label, `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Pos,
    Neg,
}

impl Label {
    pub fn from_i32(v: i32) -> Result<Label> {
        match v {
            1 => Ok(Label::Pos),
            -1 => Ok(Label::Neg),
            _ => Err(Error::InvalidArgument(format!("label must be ±1, got {v}"))),
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Label::Pos => 1.0,
            Label::Neg => -1.0,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Label::Pos => 1,
            Label::Neg => -1,
        }
    }
}

/// A unit-norm feature vector with its label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledExample {
    features: RealVector,
    label: Label,
}

impl LabeledExample {
    pub fn new(features: RealVector, label: Label) -> Result<Self> {
        check_finite(&features)?;
        let n = features.norm();
        if (n - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "example features must have unit norm, got {n}"
            )));
        }
        Ok(Self { features, label })
    }

    /// Scales `features` to unit norm first.
    pub fn normalized(features: RealVector, label: Label) -> Result<Self> {
        check_finite(&features)?;
        let n = features.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Self::new(features / n, label)
    }

    pub fn features(&self) -> &RealVector {
        &self.features
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn dim(&self) -> usize {
        self.features.len()
    }

    /// `x·y`, the example folded onto the positive side.
    pub fn signed(&self) -> RealVector {
        &self.features * self.label.sign()
    }
}

/// A non-empty set of examples sharing one dimension.
///
/// The max-margin certificate is computed on first request and cached.
#[derive(Debug, Clone)]
pub struct Dataset {
    examples: Vec<LabeledExample>,
    dim: usize,
    signed: Vec<RealVector>,
    margin: OnceLock<Result<MarginCertificate>>,
}

impl PartialEq for Dataset {
    fn eq(&self, other: &Self) -> bool {
        self.examples == other.examples
    }
}

impl Dataset {
    pub fn new(examples: Vec<LabeledExample>) -> Result<Self> {
        let first = examples
            .first()
            .ok_or_else(|| Error::InvalidArgument("dataset must be non-empty".into()))?;
        let dim = first.dim();
        for e in &examples {
            check_dims(dim, e.dim())?;
        }
        let signed = examples.iter().map(LabeledExample::signed).collect();
        Ok(Self { examples, dim, signed, margin: OnceLock::new() })
    }

    pub fn examples(&self) -> &[LabeledExample] {
        &self.examples
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.examples.len()
    }

    /// Row `i` as `y_i x_i`.
    pub fn signed_example(&self, i: usize) -> &RealVector {
        &self.signed[i]
    }

    pub fn signed_examples(&self) -> &[RealVector] {
        &self.signed
    }

    /// Max-margin certificate at [`DEFAULT_MARGIN_TOL`], computed once.
    pub fn margin(&self) -> Result<&MarginCertificate> {
        self.margin
            .get_or_init(|| max_margin(self, DEFAULT_MARGIN_TOL))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `wᵀx_i y_i ≤ 0` without dimension checks; callers validated `w`.
    pub(crate) fn misclassifies(&self, w: &RealVector, i: usize) -> bool {
        w.dot(&self.signed[i]) <= 0.0
    }

    /// Unchecked version-space test used inside solvers.
    pub(crate) fn separates(&self, w: &RealVector) -> bool {
        self.signed.iter().all(|s| w.dot(s) > 0.0)
    }
}

/// Weight vector of a homogeneous linear classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    weights: RealVector,
}

impl Hyperplane {
    pub fn new(weights: RealVector) -> Result<Self> {
        check_finite(&weights)?;
        Ok(Self { weights })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { weights: RealVector::zeros(dim) }
    }

    pub fn weights(&self) -> &RealVector {
        &self.weights
    }

    pub fn into_weights(self) -> RealVector {
        self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|&x| x == 0.0)
    }
}

impl From<RealVector> for Hyperplane {
    fn from(weights: RealVector) -> Self {
        Self { weights }
    }
}

/// `+1` iff `wᵀx > 0`, else `-1`.
pub fn classify(w: &Hyperplane, x: &RealVector) -> Result<Label> {
    check_dims(w.dim(), x.len())?;
    Ok(if w.weights.dot(x) > 0.0 { Label::Pos } else { Label::Neg })
}

/// The Boolean query: true iff `wᵀx·y ≤ 0`.
pub fn is_misclassified(w: &Hyperplane, e: &LabeledExample) -> Result<bool> {
    check_dims(w.dim(), e.dim())?;
    Ok(w.weights.dot(e.features()) * e.label().sign() <= 0.0)
}

/// True iff `w` classifies every example correctly.
pub fn in_version_space(w: &Hyperplane, d: &Dataset) -> Result<bool> {
    check_dims(d.dim(), w.dim())?;
    Ok(d.separates(&w.weights))
}

/// Angle between two nonzero vectors, in `[0, π]`.
pub fn angular_distance(a: &RealVector, b: &RealVector) -> Result<f64> {
    check_dims(a.len(), b.len())?;
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok((a.dot(b) / (na * nb)).clamp(-1.0, 1.0).acos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::mohri_hard_dataset;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn v(xs: &[f64]) -> RealVector {
        RealVector::from_column_slice(xs)
    }

    fn ex(xs: &[f64], y: i32) -> LabeledExample {
        LabeledExample::new(v(xs), Label::from_i32(y).unwrap()).unwrap()
    }

    #[test]
    fn classify_examples() {
        let w = Hyperplane::new(v(&[1.0, 0.0])).unwrap();
        assert_eq!(classify(&w, &v(&[0.6, 0.8])).unwrap(), Label::Pos);
        assert_eq!(classify(&w, &v(&[0.0, 1.0])).unwrap(), Label::Neg);
        let w = Hyperplane::new(v(&[-1.0, 0.0])).unwrap();
        assert_eq!(classify(&w, &v(&[0.6, 0.8])).unwrap(), Label::Neg);
        assert!(matches!(
            classify(&w, &v(&[1.0, 0.0, 0.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn misclassification_examples() {
        let w = Hyperplane::new(v(&[1.0, 0.0])).unwrap();
        assert!(!is_misclassified(&w, &ex(&[1.0, 0.0], 1)).unwrap());
        assert!(is_misclassified(&w, &ex(&[0.0, 1.0], 1)).unwrap());
        assert!(is_misclassified(&w, &ex(&[1.0, 0.0], -1)).unwrap());
    }

    #[test]
    fn version_space_on_mohri_wedge() {
        let d = mohri_hard_dataset(2).unwrap();
        let at = |deg: f64| Hyperplane::new(v(&[deg.to_radians().cos(), deg.to_radians().sin()])).unwrap();
        assert!(in_version_space(&at(60.0), &d).unwrap());
        assert!(in_version_space(&at(46.0), &d).unwrap());
        assert!(in_version_space(&at(89.0), &d).unwrap());
        let s = 0.5f64.sqrt();
        assert!(!in_version_space(&Hyperplane::new(v(&[s, s])).unwrap(), &d).unwrap());
        assert!(!in_version_space(&Hyperplane::new(v(&[0.0, 1.0])).unwrap(), &d).unwrap());
        assert!(!in_version_space(&at(100.0), &d).unwrap());
        assert!(!in_version_space(&Hyperplane::new(v(&[1.0, 0.0])).unwrap(), &d).unwrap());
        let cert = max_margin(&d, DEFAULT_MARGIN_TOL).unwrap();
        assert!(in_version_space(&Hyperplane::from(cert.separator.clone()), &d).unwrap());
    }

    #[test]
    fn angular_distance_examples() {
        assert!((angular_distance(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(angular_distance(&v(&[1.0, 0.0]), &v(&[1.0, 0.0])).unwrap(), 0.0);
        assert!((angular_distance(&v(&[1.0, 0.0]), &v(&[1.0, 1.0])).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(angular_distance(&v(&[0.0, 0.0]), &v(&[1.0, 0.0])), Err(Error::ZeroVector));
    }

    #[test]
    fn example_and_dataset_invariants() {
        assert!(LabeledExample::new(v(&[0.5, 0.0]), Label::Pos).is_err());
        assert!(Label::from_i32(0).is_err());
        assert!(Dataset::new(vec![]).is_err());
        let bad = Dataset::new(vec![ex(&[1.0, 0.0], 1), ex(&[1.0, 0.0, 0.0], 1)]);
        assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));
    }
}
