//! Fixtures shared by the criterion benchmarks.

use polyloop_core::polyring::{parse_polynomial, rat};
use polyloop_core::{InvariantSpec, LoopTemplate, Polynomial, VarContext};

/// `g = x1^2 - x2^2 + x1*x2` under the linear map `(2x1 - 3x2, x1 + x2)`.
pub fn rotation() -> (Vec<Polynomial>, Vec<Polynomial>) {
    let x = VarContext::new(&["x1", "x2"]).expect("valid names");
    let p = |s: &str| parse_polynomial(s, &x).expect("valid polynomial");
    (vec![p("x1^2 - x2^2 + x1*x2")], vec![p("2*x1 - 3*x2"), p("x1 + x2")])
}

/// Three-variable template with two cubic invariants.
pub fn cubic_template() -> (LoopTemplate, InvariantSpec) {
    let x = VarContext::new(&["x1", "x2", "x3"]).expect("valid names");
    let p = |s: &str| parse_polynomial(s, &x).expect("valid polynomial");
    let t = LoopTemplate::new(
        &x,
        vec![rat(1), rat(1), rat(-1)],
        Polynomial::one(&x),
        vec![vec![p("x1^3"), p("x2^2")], vec![p("x1"), p("x2^2")], vec![p("x1")]],
    )
    .expect("valid template");
    let inv = InvariantSpec::new(vec![p("x2^2 - x1"), p("x3^3 + 2*x2^2 - x1")]).expect("valid invariants");
    (t, inv)
}

/// Cyclic-3 system, a standard Gröbner basis workload.
pub fn cyclic3() -> Vec<Polynomial> {
    let x = VarContext::new(&["a", "b", "c"]).expect("valid names");
    ["a + b + c", "a*b + b*c + c*a", "a*b*c - 1"]
        .iter()
        .map(|s| parse_polynomial(s, &x).expect("valid polynomial"))
        .collect()
}
