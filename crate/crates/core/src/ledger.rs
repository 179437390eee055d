//! Query and operation accounting.

use std::ops::{Add, AddAssign};

/// Counters for every kind of oracle call and operation the solvers make.
///
/// `verification_queries` holds the classical queries spent on the explicit
/// per-round version-space check. They are kept apart so complexity fits
/// can exclude them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct QueryLedger {
    pub classical_queries: u64,
    pub quantum_queries: u64,
    pub membership_queries: u64,
    pub walk_applications: u64,
    pub arithmetic_ops: u64,
    pub verification_queries: u64,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn merge(&mut self, other: &QueryLedger) {
        *self += *other;
    }

    /// Classical plus quantum queries, excluding verification passes.
    pub fn total_queries(&self) -> u64 {
        self.classical_queries + self.quantum_queries
    }
}

impl AddAssign for QueryLedger {
    fn add_assign(&mut self, o: QueryLedger) {
        self.classical_queries += o.classical_queries;
        self.quantum_queries += o.quantum_queries;
        self.membership_queries += o.membership_queries;
        self.walk_applications += o.walk_applications;
        self.arithmetic_ops += o.arithmetic_ops;
        self.verification_queries += o.verification_queries;
    }
}

impl Add for QueryLedger {
    type Output = QueryLedger;
    fn add(mut self, o: QueryLedger) -> QueryLedger {
        self += o;
        self
    }
}
