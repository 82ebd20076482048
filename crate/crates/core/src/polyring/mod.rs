//! Sparse multivariate polynomials with exact rational coefficients.

mod context;
mod monomial;
mod order;
mod polynomial;
mod text;

pub use context::{VarBlock, VarContext};
pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use polynomial::Polynomial;
pub use text::{parse_polynomial, parse_rational};

/// Exact arbitrary-precision rational scalar.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `num/den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
