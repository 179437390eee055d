//! Version-space sampling, quantum-search perceptron solvers and
//! desk-scale quantum walk simulation.
//!
//! Quantum subroutines are simulated exactly in small invariant subspaces
//! and every oracle call is charged to a [`QueryLedger`], so classical and
//! quantum variants can be compared by query count.

pub mod datasets;
pub mod error;
pub mod geometry;
pub mod ledger;
pub mod qsearch;
pub mod qwalk;
pub mod rng;
pub mod solvers;

pub use error::{Error, Result};
pub use geometry::{
    angular_distance, classify, in_version_space, is_misclassified, max_margin, Dataset,
    Hyperplane, Label, LabeledExample, MarginCertificate, RealVector,
};
pub use ledger::QueryLedger;
