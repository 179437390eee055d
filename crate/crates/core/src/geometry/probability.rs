//! Probability that a random hyperplane lands in the version space.

use super::{regularized_incomplete_beta, Dataset};
use crate::error::{Error, Result};
use crate::rng::substream;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::f64::consts::PI;

const MC_CHUNK: u64 = 1 << 16;

/// Probability that a standard-normal direction lies within angle
/// `asin γ` of a fixed unit vector: `½ I_{γ²}((D−1)/2, ½)`.
pub fn sector_probability(gamma: f64, dim: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) || dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "sector probability needs γ in [0,1] and D ≥ 2 (γ={gamma}, D={dim})"
        )));
    }
    let a = (dim as f64 - 1.0) / 2.0;
    Ok(0.5 * regularized_incomplete_beta(gamma * gamma, a, 0.5)?)
}

/// Which leading-order expansion of the sector probability to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundRegime {
    /// `γ^{D−1} / (π(D−1))`.
    FixedD,
    /// `γ^{D−1} / √(2π(D−1))`.
    LargeD,
}

/// Leading-order lower bound on the sector probability.
pub fn asymptotic_lower_bound(gamma: f64, dim: usize, regime: BoundRegime) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) || dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "asymptotic bound needs 0 < γ < 1 and D ≥ 2 (γ={gamma}, D={dim})"
        )));
    }
    let k = dim as f64 - 1.0;
    let lead = gamma.powf(k);
    Ok(match regime {
        BoundRegime::FixedD => lead / (PI * k),
        BoundRegime::LargeD => lead / (2.0 * PI * k).sqrt(),
    })
}

/// Monte-Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    /// `√(max(p̂, 1/n)(1 − p̂)/n)`: a zero-hit run still reports the
    /// resolution of the experiment rather than zero.
    pub stderr: f64,
    pub hits: u64,
    pub trials: u64,
}

/// Fraction of standard-normal hyperplanes that separate `d`.
///
/// Trials are split into fixed chunks, each with its own substream, so the
/// result depends only on `(d, trials, seed)`.
pub fn mc_version_space_probability(d: &Dataset, trials: u64, seed: u64) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be ≥ 1".into()));
    }
    let dim = d.dim();
    let rows: Vec<&[f64]> = d.signed_examples().iter().map(|r| r.as_slice()).collect();
    let chunks = trials.div_ceil(MC_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(seed, c);
            let len = MC_CHUNK.min(trials - c * MC_CHUNK);
            let mut w = vec![0.0f64; dim];
            let mut hits = 0u64;
            for _ in 0..len {
                for wi in w.iter_mut() {
                    *wi = rng.sample(StandardNormal);
                }
                let inside = rows
                    .iter()
                    .all(|r| r.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() > 0.0);
                hits += inside as u64;
            }
            hits
        })
        .sum();
    let n = trials as f64;
    let p = hits as f64 / n;
    let stderr = (p.max(1.0 / n) * (1.0 - p) / n).sqrt();
    Ok(McEstimate { estimate: p, stderr, hits, trials })
}

/// `K = ⌈(1/p) ln(1/δ)⌉` samples find a success of probability `p` with
/// failure probability at most `δ`.
pub fn required_sample_count(p: f64, delta: f64) -> Result<u64> {
    if !(p > 0.0 && p <= 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sample count needs p in (0,1] and δ in (0,1) (p={p}, δ={delta})"
        )));
    }
    let k = -delta.ln() / p;
    // Absorb rounding noise so exact integers are not bumped up by one.
    let k = (k * (1.0 - 4.0 * f64::EPSILON)).ceil();
    if k >= u64::MAX as f64 {
        return Ok(u64::MAX);
    }
    Ok((k as u64).max(1))
}
