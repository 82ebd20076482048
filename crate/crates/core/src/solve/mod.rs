//! Searching the synthesis variety for rational or integer points.
//!
//! Exact routines handle the structured cases (linear systems, univariate
//! rational roots, finiteness via the staircase), a bounded integer box
//! search serves as an oracle, and general systems go to an external
//! SMT-LIB2 solver whose models are re-verified exactly before being trusted.

mod brute;
mod external;
mod finiteness;
mod linear;
mod roots;
pub mod smtlib;

use std::time::Duration;

use num_traits::Zero;

pub use brute::{brute_force_box, DEFAULT_ENUMERATION_CAP};
pub use external::{run_external_solver, SmtSolver, SOLVER_ENV};
pub use finiteness::{classify_finiteness, Finiteness};
pub use linear::{solve_linear, LinearSolution};
pub use roots::rational_roots;
pub use smtlib::emit_smtlib;

use crate::error::{Error, Result};
use crate::polyring::Rational;
use crate::synthesis::SynthesisSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveDomain {
    Integers,
    Rationals,
}

/// Which coefficient vectors count as nontrivial solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NonzeroPolicy {
    /// At least one coordinate is nonzero.
    #[default]
    VectorNonzero,
    /// Every coordinate is nonzero.
    AllNonzero,
    /// The given coordinate (0-based) is nonzero.
    Coordinate(usize),
    /// No restriction.
    None,
}

impl NonzeroPolicy {
    pub fn admits(&self, b: &[Rational]) -> bool {
        match *self {
            NonzeroPolicy::VectorNonzero => b.iter().any(|v| !v.is_zero()),
            NonzeroPolicy::AllNonzero => b.iter().all(|v| !v.is_zero()),
            NonzeroPolicy::Coordinate(k) => b.get(k).is_some_and(|v| !v.is_zero()),
            NonzeroPolicy::None => true,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolveRequest<'a> {
    pub system: &'a SynthesisSystem,
    pub domain: SolveDomain,
    pub policy: NonzeroPolicy,
    pub timeout: Duration,
}

impl<'a> SolveRequest<'a> {
    pub fn new(system: &'a SynthesisSystem) -> Self {
        SolveRequest {
            system,
            domain: SolveDomain::Integers,
            policy: NonzeroPolicy::default(),
            timeout: Duration::from_secs(60),
        }
    }

    /// Checks a candidate model exactly: every polynomial vanishes, the
    /// nonzero policy holds, and integrality holds for the integer domain.
    pub fn verify(&self, b: &[Rational]) -> Result<()> {
        if b.len() != self.system.num_vars() {
            return Err(Error::MalformedModel(format!(
                "model has {} values for {} variables",
                b.len(),
                self.system.num_vars()
            )));
        }
        if self.domain == SolveDomain::Integers && !b.iter().all(Rational::is_integer) {
            return Err(Error::MalformedModel("non-integer value in an integer model".into()));
        }
        if !self.policy.admits(b) {
            return Err(Error::MalformedModel("model violates the nonzero policy".into()));
        }
        for p in self.system.polys() {
            if !p.evaluate(b)?.is_zero() {
                return Err(Error::MalformedModel(format!("model does not satisfy {p}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    /// A verified assignment, in the order of the system's variables.
    Sat(Vec<Rational>),
    Unsat,
    Unknown,
    SolverUnavailable,
}

impl SolveStatus {
    pub fn label(&self) -> &'static str {
        match self {
            SolveStatus::Sat(_) => "sat",
            SolveStatus::Unsat => "unsat",
            SolveStatus::Unknown => "unknown",
            SolveStatus::SolverUnavailable => "solver-unavailable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Solver transcript or the reason for a non-sat status.
    pub diagnostics: String,
}

impl SolveOutcome {
    pub fn assignment(&self) -> Option<&[Rational]> {
        match &self.status {
            SolveStatus::Sat(b) => Some(b),
            _ => None,
        }
    }
}
