//! Exact synthesis of polynomial loops from polynomial invariants.
//!
//! Given a loop template (initial point, guard, and per-variable generator
//! polynomials) and a list of target invariants, [`synthesis::generate_loops`]
//! computes polynomials in the template coefficients whose common zero set is
//! exactly the set of coefficient vectors making every invariant hold. The
//! [`solve`] module then looks for rational or integer points on that variety,
//! and concrete loops can be verified both by simulation and by the exact
//! invariant-set criterion.
//!
//! All arithmetic is exact over the rationals.

pub mod budget;
pub mod error;
pub mod groebner;
pub mod polyring;
pub mod solve;
pub mod synthesis;

pub use budget::{Budget, DEFAULT_MAX_ROUNDS};
pub use error::{Error, Result};
pub use groebner::{GroebnerBasis, RadicalOracle};
pub use polyring::{Monomial, MonomialOrder, Polynomial, Rational, VarBlock, VarContext};
pub use solve::{Finiteness, NonzeroPolicy, SolveDomain, SolveOutcome, SolveRequest, SolveStatus};
pub use synthesis::{ConcreteLoop, InvariantSpec, LoopTemplate, SynthesisSystem};
