//! Dataset generators and CSV persistence.

use crate::error::{Error, Result};
use crate::geometry::{Dataset, Label, LabeledExample, RealVector, UNIT_NORM_TOL};
use crate::rng::stream;
use rand::Rng;
use rand_distr::StandardNormal;
use std::path::{Path, PathBuf};

/// Where a dataset comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DatasetKind {
    Mohri,
    RandomMargin,
    File(PathBuf),
}

/// A reproducible recipe for a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub kind: DatasetKind,
    pub dim: usize,
    pub size: usize,
    pub target_margin: Option<f64>,
    pub seed: Option<u64>,
    /// Rescale loaded rows to unit norm instead of rejecting them.
    pub normalize: bool,
}

impl DatasetSpec {
    pub fn build(&self) -> Result<Dataset> {
        match &self.kind {
            DatasetKind::Mohri => mohri_hard_dataset(self.dim),
            DatasetKind::RandomMargin => {
                let m = self.target_margin.ok_or_else(|| {
                    Error::InvalidArgument("random-margin datasets need a target margin".into())
                })?;
                random_separable_dataset(self.dim, self.size, m, self.seed.unwrap_or(0))
            }
            DatasetKind::File(p) => load_dataset(p, self.normalize),
        }
    }
}

fn unit_gaussian<R: Rng>(rng: &mut R, dim: usize) -> RealVector {
    loop {
        let v = RealVector::from_fn(dim, |_, _| rng.sample(StandardNormal));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

fn example(signed: RealVector, label: Label) -> Result<LabeledExample> {
    LabeledExample::normalized(signed * label.sign(), label)
}

/// The hard dataset with `N = D` examples.
///
/// Row `i` (1-based) has its first `i−1` entries equal to `(−1)^i`, entry
/// `i` equal to `(−1)^{i+1}`, zeros after, and label `(−1)^{i+1}`. Its
/// margin is at most `√(1/2^{D−1})`.
pub fn mohri_hard_dataset(dim: usize) -> Result<Dataset> {
    if dim < 2 {
        return Err(Error::InvalidArgument("the hard dataset needs D ≥ 2".into()));
    }
    let sign = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
    let examples = (1..=dim)
        .map(|i| {
            let mut x = RealVector::zeros(dim);
            for j in 0..i - 1 {
                x[j] = sign(i);
            }
            x[i - 1] = sign(i + 1);
            let label = if i % 2 == 1 { Label::Pos } else { Label::Neg };
            LabeledExample::normalized(x, label)
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(examples)
}

/// `N` uniform points on the sphere outside the slab `|uᵀx| < margin` of a
/// random unit `u`, labelled by `sign(uᵀx)`.
pub fn random_separable_dataset(dim: usize, size: usize, margin: f64, seed: u64) -> Result<Dataset> {
    if dim < 1 || size < 1 {
        return Err(Error::InvalidArgument("random datasets need D ≥ 1 and N ≥ 1".into()));
    }
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::InvalidArgument(format!("target margin must lie in (0,1), got {margin}")));
    }
    let mut rng = stream(seed);
    let u = unit_gaussian(&mut rng, dim);
    let budget = 2_000_000 + 1000 * size;
    let mut attempts = 0usize;
    let mut examples = Vec::with_capacity(size);
    while examples.len() < size {
        if attempts >= budget {
            return Err(Error::RejectionBudget { attempts });
        }
        attempts += 1;
        let x = unit_gaussian(&mut rng, dim);
        let s = u.dot(&x);
        if s.abs() >= margin {
            let label = if s > 0.0 { Label::Pos } else { Label::Neg };
            examples.push(LabeledExample::normalized(x, label)?);
        }
    }
    Dataset::new(examples)
}

/// `2(D−1)` examples whose signed points are `γe₁ ± √(1−γ²)eⱼ`,
/// `j = 2..D`. The margin is exactly `γ` with separator `e₁`.
pub fn cone_dataset(dim: usize, gamma: f64) -> Result<Dataset> {
    if dim < 2 || !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "cone datasets need D ≥ 2 and γ in (0,1) (D={dim}, γ={gamma})"
        )));
    }
    let s = (1.0 - gamma * gamma).sqrt();
    let mut examples = Vec::with_capacity(2 * (dim - 1));
    for j in 1..dim {
        for (k, side) in [1.0, -1.0].into_iter().enumerate() {
            let mut p = RealVector::zeros(dim);
            p[0] = gamma;
            p[j] = side * s;
            let label = if (j + k) % 2 == 0 { Label::Pos } else { Label::Neg };
            examples.push(example(p, label)?);
        }
    }
    Dataset::new(examples)
}

/// `N − 1` easy examples with `uᵀyx ∈ [0.8, 1]` and one hard example with
/// `uᵀyx = γ`, for a random unit `u` and random labels.
///
/// After the first perceptron update only a handful of examples stay
/// misclassified, whatever `N` is.
pub fn planted_dataset(dim: usize, size: usize, gamma: f64, seed: u64) -> Result<Dataset> {
    if dim < 2 || size < 1 || !(gamma > 0.0 && gamma <= 0.8) {
        return Err(Error::InvalidArgument(format!(
            "planted datasets need D ≥ 2, N ≥ 1 and γ in (0, 0.8] (D={dim}, N={size}, γ={gamma})"
        )));
    }
    let mut rng = stream(seed);
    let u = unit_gaussian(&mut rng, dim);
    let tilted = |rng: &mut crate::rng::StreamRng, t: f64| {
        let mut v = unit_gaussian(rng, dim);
        v.axpy(-u.dot(&v), &u, 1.0);
        let n = v.norm();
        let v = if n > 1e-12 { v / n } else { v };
        &u * t + v * (1.0 - t * t).max(0.0).sqrt()
    };
    let hard_at = rng.random_range(0..size);
    let mut examples = Vec::with_capacity(size);
    for i in 0..size {
        let t = if i == hard_at { gamma } else { rng.random_range(0.8..=1.0) };
        let p = tilted(&mut rng, t);
        let label = if rng.random::<bool>() { Label::Pos } else { Label::Neg };
        examples.push(example(p, label)?);
    }
    Dataset::new(examples)
}

/// Reads one example per row: `D` feature columns then a `±1` label.
///
/// A first row that does not parse as numbers is taken as a header. Lines
/// starting with `#` are skipped. Rows whose norm is off by more than
/// `1e−9` are rescaled when `normalize` is set and rejected otherwise.
pub fn load_dataset(path: impl AsRef<Path>, normalize: bool) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path.as_ref())
        .map_err(|e| Error::Io(e.to_string()))?;
    let mut examples = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Io(e.to_string()))?;
        let line = rec.position().map_or(idx + 1, |p| p.line() as usize);
        let cells: Vec<f64> = match rec.iter().map(str::parse::<f64>).collect() {
            Ok(c) => c,
            Err(_) if idx == 0 => continue,
            Err(e) => return Err(Error::Parse { line, reason: format!("non-numeric cell: {e}") }),
        };
        if cells.len() < 2 {
            return Err(Error::Parse { line, reason: "need at least one feature and a label".into() });
        }
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => {
                return Err(Error::Parse {
                    line,
                    reason: format!("ragged row: {} cells, expected {w}", cells.len()),
                })
            }
            _ => {}
        }
        let (features, label) = cells.split_at(cells.len() - 1);
        let label = match label[0] {
            l if l == 1.0 => Label::Pos,
            l if l == -1.0 => Label::Neg,
            l => return Err(Error::Parse { line, reason: format!("label must be ±1, got {l}") }),
        };
        let x = RealVector::from_column_slice(features);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse { line, reason: "non-finite feature".into() });
        }
        let n = x.norm();
        let e = if (n - 1.0).abs() > UNIT_NORM_TOL {
            if !normalize {
                return Err(Error::Parse {
                    line,
                    reason: format!("row norm {n} is not 1 (enable normalization to rescale)"),
                });
            }
            LabeledExample::normalized(x, label)
        } else {
            LabeledExample::new(x, label)
        };
        examples.push(e.map_err(|err| Error::Parse { line, reason: err.to_string() })?);
    }
    if examples.is_empty() {
        return Err(Error::Parse { line: 0, reason: "no examples".into() });
    }
    Dataset::new(examples)
}

/// Writes `d` in the format read by [`load_dataset`], without a header.
pub fn save_dataset(d: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path.as_ref())
        .map_err(|e| Error::Io(e.to_string()))?;
    for e in d.examples() {
        let mut row: Vec<String> = e.features().iter().map(|v| format!("{v:?}")).collect();
        row.push(e.label().as_i32().to_string());
        w.write_record(&row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
