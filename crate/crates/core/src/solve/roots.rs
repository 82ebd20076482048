use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyring::{Polynomial, Rational};

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// All distinct rational roots of a univariate polynomial, ascending.
/// Constants other than zero have no roots.
pub fn rational_roots(p: &Polynomial) -> Result<Vec<Rational>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let support = p.support();
    if support.len() > 1 {
        return Err(Error::NotUnivariate);
    }
    let Some(&var) = support.first() else {
        return Ok(Vec::new());
    };
    // Dense integer coefficients, index = degree.
    let ints = p.integer_coefficients();
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for ((m, _), c) in p.terms().iter().zip(ints) {
        coeffs[m.exponent(var) as usize] = c;
    }
    let mut roots = Vec::new();
    // Factor out x^k.
    let low = coeffs.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.push(Rational::zero());
    }
    let coeffs = &coeffs[low..];
    if coeffs.len() > 1 {
        let horner = |x: &Rational| {
            coeffs
                .iter()
                .rev()
                .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
        };
        let ps = divisors(&coeffs[0]);
        let qs = divisors(coeffs.last().unwrap());
        for num in &ps {
            for den in &qs {
                if !num.gcd(den).is_one() {
                    continue;
                }
                for sign in [1, -1] {
                    let x = Rational::new(num * sign, den.clone());
                    if horner(&x).is_zero() {
                        roots.push(x);
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}
