//! Loop synthesis from polynomial invariants.
//!
//! A loop `x ← a; while h(x) ≠ 0 { x ← F(x) }` satisfies an invariant `g` when
//! `g` vanishes on every state the execution visits, including the state in
//! which the guard first vanishes. Invariance is decided exactly through
//! invariant sets of polynomial maps ([`invariant_set`]), and the same
//! machinery applied to a map with symbolic coefficients yields the
//! polynomial system cutting out every admissible coefficient vector
//! ([`generate_loops`]).

mod check;
mod generate;
mod invariant_set;
mod template;

pub use check::{check_invariants, simulate, Simulation};
pub use generate::{generate_loops, SynthesisSystem};
pub use invariant_set::{invariant_set, InvariantSet};
pub use template::{build_augmented_map, AugmentedMap, ConcreteLoop, InvariantSpec, LoopTemplate};
