//! Grover search simulated in its two-dimensional invariant subspace.
//!
//! Starting from the uniform superposition, the Grover iterate only mixes
//! the uniform state over marked indices with the uniform state over
//! unmarked ones. A run of `k` iterations is therefore a rotation by
//! `2kθ` with `sin²θ = M/N`, and the measurement outcome can be sampled
//! exactly without a state vector.

use crate::error::{Error, Result};
use crate::ledger::QueryLedger;
use nalgebra::{Complex, DVector};
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use std::f64::consts::PI;

/// Complex amplitude.
pub type C64 = Complex<f64>;

/// Index set `0..N` with a Boolean predicate and a query ledger.
///
/// [`MarkedOracle::query`] is the only way the algorithms see the predicate
/// and it is charged one classical query per call. The simulator itself
/// enumerates the marked set once, without charge, to drive the exact
/// amplitudes.
pub struct MarkedOracle {
    size: usize,
    is_marked: Vec<bool>,
    marked: Vec<usize>,
    unmarked: Vec<usize>,
    ledger: QueryLedger,
}

impl MarkedOracle {
    pub fn new(size: usize, predicate: impl Fn(usize) -> bool) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("oracle needs N ≥ 1".into()));
        }
        let is_marked: Vec<bool> = (0..size).map(predicate).collect();
        let (marked, unmarked): (Vec<usize>, Vec<usize>) = (0..size).partition(|&i| is_marked[i]);
        Ok(Self { size, is_marked, marked, unmarked, ledger: QueryLedger::new() })
    }

    /// Oracle whose marked set is the given indices.
    pub fn with_marked(size: usize, marked: &[usize]) -> Result<Self> {
        if let Some(&bad) = marked.iter().find(|&&i| i >= size) {
            return Err(Error::InvalidArgument(format!("marked index {bad} out of range 0..{size}")));
        }
        let mut flags = vec![false; size];
        marked.iter().for_each(|&i| flags[i] = true);
        Self::new(size, |i| flags[i])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Classical evaluation of the predicate.
    pub fn query(&mut self, i: usize) -> bool {
        self.ledger.classical_queries += 1;
        self.is_marked[i]
    }

    /// Number of marked indices, as known to the simulator only.
    pub fn marked_count(&self) -> usize {
        self.marked.len()
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn ledger_mut(&mut self) -> &mut QueryLedger {
        &mut self.ledger
    }

    pub fn into_ledger(self) -> QueryLedger {
        self.ledger
    }
}

/// `sin²((2k+1)θ)` with `θ = asin √(M/N)`; zero when `M = 0`.
pub fn grover_success_probability(n: usize, m: usize, k: u64) -> Result<f64> {
    if n == 0 || m > n {
        return Err(Error::InvalidArgument(format!("need 0 ≤ M ≤ N and N ≥ 1 (N={n}, M={m})")));
    }
    if m == 0 {
        return Ok(0.0);
    }
    if m == n {
        return Ok(1.0);
    }
    let theta = (m as f64 / n as f64).sqrt().asin();
    Ok(((2 * k + 1) as f64 * theta).sin().powi(2))
}

/// Measures after `k` Grover iterations: a uniform marked index with
/// probability `sin²((2k+1)θ)`, otherwise a uniform unmarked index.
/// Charges `k` quantum queries.
pub fn grover_sample<R: Rng + ?Sized>(oracle: &mut MarkedOracle, k: u64, rng: &mut R) -> usize {
    oracle.ledger.quantum_queries += k;
    let p = grover_success_probability(oracle.size, oracle.marked.len(), k)
        .expect("oracle invariants guarantee M ≤ N");
    let hit = rng.random::<f64>() < p;
    if (hit && !oracle.marked.is_empty()) || oracle.unmarked.is_empty() {
        oracle.marked[rng.random_range(0..oracle.marked.len())]
    } else {
        oracle.unmarked[rng.random_range(0..oracle.unmarked.len())]
    }
}

/// Growth factor of the iteration-count schedule.
pub const QSEARCH_GROWTH: f64 = 6.0 / 5.0;
/// Quantum-query budget per invocation, in units of `√N`.
pub const QSEARCH_BUDGET_FACTOR: f64 = 9.0;

/// Search with an unknown number of marked items.
///
/// Draws `k` uniformly from `0..⌈m⌉`, runs `k` Grover iterations, verifies
/// the outcome with one classical query, and grows `m ← min(6m/5, √N)`.
/// Stops once the next `k` would exceed `9√N` quantum queries in total.
/// Any returned index is marked.
pub fn qsearch<R: Rng + ?Sized>(oracle: &mut MarkedOracle, rng: &mut R) -> Option<usize> {
    let root = (oracle.size as f64).sqrt();
    let budget = (QSEARCH_BUDGET_FACTOR * root).floor() as u64;
    let max_rounds = 9 * root.ceil() as u64 + 32;
    let mut m = 1.0f64;
    let mut spent = 0u64;
    for _ in 0..max_rounds {
        let k = rng.random_range(0..m.ceil() as u64);
        if spent + k > budget {
            break;
        }
        spent += k;
        let i = grover_sample(oracle, k, rng);
        if oracle.query(i) {
            return Some(i);
        }
        m = (QSEARCH_GROWTH * m).min(root);
    }
    None
}

/// `sin²(Tφ/2) / (T² sin²(φ/2))`, the phase-estimation outcome kernel.
pub fn fejer_kernel(t: f64, phi: f64) -> f64 {
    let s = (phi / 2.0).sin();
    if s.abs() < 1e-15 {
        return 1.0;
    }
    let v = ((t * phi / 2.0).sin() / (t * s)).powi(2);
    v.min(1.0)
}

/// Estimates `M` by phase estimation on the Grover iterate with a
/// `precision_bits`-qubit register.
///
/// The uniform start splits evenly over the eigenvectors with phases
/// `±2θ`, so outcome `j` has probability
/// `½F(2θ − 2πj/T) + ½F(−2θ − 2πj/T)`, with `T = 2^precision_bits`.
/// Returns `round(N sin²(πj/T))` and charges `T` quantum queries.
pub fn quantum_counting<R: Rng + ?Sized>(
    oracle: &mut MarkedOracle,
    precision_bits: u32,
    rng: &mut R,
) -> Result<u64> {
    if precision_bits > 20 {
        return Err(Error::ResourceGuard(format!("precision bits {precision_bits} > 20")));
    }
    let t = 1u64 << precision_bits;
    oracle.ledger.quantum_queries += t;
    let n = oracle.size as f64;
    let theta = (oracle.marked.len() as f64 / n).sqrt().asin();
    let tf = t as f64;
    let prob = |j: u64| {
        let grid = 2.0 * PI * j as f64 / tf;
        0.5 * fejer_kernel(tf, 2.0 * theta - grid) + 0.5 * fejer_kernel(tf, -2.0 * theta - grid)
    };
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut outcome = t - 1;
    for j in 0..t {
        acc += prob(j);
        if u < acc {
            outcome = j;
            break;
        }
    }
    let est = n * (PI * outcome as f64 / tf).sin().powi(2);
    Ok(est.round() as u64)
}

/// Swap test: each shot accepts with probability `(1 + |⟨a|b⟩|²)/2`.
/// Returns `2·rate − 1` clamped to `[0, 1]`.
pub fn swap_test_overlap<R: Rng + ?Sized>(
    a: &DVector<C64>,
    b: &DVector<C64>,
    shots: u64,
    rng: &mut R,
) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    if shots == 0 {
        return Err(Error::InvalidArgument("swap test needs at least one shot".into()));
    }
    for s in [a, b] {
        if (s.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument("swap test states must be unit norm".into()));
        }
    }
    let overlap = a.dotc(b).norm_sqr().min(1.0);
    let accept = Binomial::new(shots, 0.5 * (1.0 + overlap))
        .map_err(|e| Error::Numerical(e.to_string()))?
        .sample(rng);
    Ok((2.0 * accept as f64 / shots as f64 - 1.0).clamp(0.0, 1.0))
}
