use super::grid::EpsilonGrid;
use crate::error::{Error, Result};
use crate::geometry::RealVector;
use crate::ledger::QueryLedger;
use crate::qsearch::C64;
use nalgebra::DVector;

/// Norm tolerance for states.
pub const STATE_NORM_TOL: f64 = 1e-9;

/// `e^{iπ/3}`.
pub fn omega() -> C64 {
    C64::from_polar(1.0, std::f64::consts::FRAC_PI_3)
}

/// A unit vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumSampleState {
    amplitudes: DVector<C64>,
}

impl QuantumSampleState {
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        let n = amplitudes.norm();
        if amplitudes.is_empty() || (n - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::InvalidArgument(format!("state must be unit norm, got norm {n}")));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let n = amplitudes.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Self::new(amplitudes.unscale(n))
    }

    /// `Σ √f(x) |x⟩` for a probability vector `f`.
    pub fn from_distribution(f: &[f64]) -> Result<Self> {
        if f.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::InvalidArgument("distribution has negative entries".into()));
        }
        Self::new(DVector::from_iterator(f.len(), f.iter().map(|&p| C64::new(p.sqrt(), 0.0))))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::from_distribution(&vec![1.0 / n as f64; n])
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Measurement probabilities `|a_x|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &QuantumSampleState) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: other.len() });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes).norm_sqr())
    }
}

/// A linear operator on a fixed-size complex vector space.
pub trait Operator {
    fn dim(&self) -> usize;
    fn apply(&self, v: &DVector<C64>) -> DVector<C64>;
    fn apply_adjoint(&self, v: &DVector<C64>) -> DVector<C64>;
}

/// `phase·|s⟩⟨s| + (I − |s⟩⟨s|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reflection {
    state: DVector<C64>,
    phase: C64,
}

impl Reflection {
    pub fn state(&self) -> &DVector<C64> {
        &self.state
    }

    pub fn phase(&self) -> C64 {
        self.phase
    }

    fn act(&self, v: &DVector<C64>, phase: C64) -> DVector<C64> {
        let c = self.state.dotc(v) * (phase - C64::new(1.0, 0.0));
        let mut out = v.clone();
        out.axpy(c, &self.state, C64::new(1.0, 0.0));
        out
    }
}

impl Operator for Reflection {
    fn dim(&self) -> usize {
        self.state.len()
    }

    fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        self.act(v, self.phase)
    }

    fn apply_adjoint(&self, v: &DVector<C64>) -> DVector<C64> {
        self.act(v, self.phase.conj())
    }
}

/// Selective phase shift about `s` by a unit-modulus `phase`.
pub fn reflection_about_state(s: &QuantumSampleState, phase: C64) -> Result<Reflection> {
    if (phase.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument("reflection phase must have unit modulus".into()));
    }
    Ok(Reflection { state: s.amplitudes.clone(), phase })
}

/// Mean `Σ |a_x|² x` of the measurement distribution of `s` over `g`.
///
/// The state is left untouched. The estimation is charged as `D`
/// applications of a transition unitary costing `unitary_cost` walk
/// applications each.
pub fn estimate_mean_nondestructive(
    s: &QuantumSampleState,
    g: &EpsilonGrid,
    ledger: &mut QueryLedger,
    unitary_cost: u64,
) -> Result<RealVector> {
    if s.len() != g.len() {
        return Err(Error::DimensionMismatch { expected: g.len(), got: s.len() });
    }
    let mut mean = RealVector::zeros(g.dim());
    for (a, x) in s.amplitudes.iter().zip(g.points()) {
        mean.axpy(a.norm_sqr(), x, 1.0);
    }
    ledger.walk_applications += g.dim() as u64 * unitary_cost;
    Ok(mean)
}
