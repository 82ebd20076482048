use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polyring::Rational;
use crate::synthesis::SynthesisSystem;

/// Largest box [-B, B]^l that [`brute_force_box`] will enumerate.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Every integer point of `[-bound, bound]^l` at which all polynomials of the
/// system vanish, in odometer order (first coordinate varies fastest). The
/// work estimate `l * (2B+1)^l` must not exceed `cap`.
pub fn brute_force_box(system: &SynthesisSystem, bound: u32, cap: u128) -> Result<Vec<Vec<Rational>>> {
    let l = system.num_vars();
    let side = 2 * bound as u128 + 1;
    let total = side
        .checked_pow(l as u32)
        .and_then(|t| t.checked_mul(l.max(1) as u128))
        .unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::EnumerationCap(total));
    }
    let b = i64::from(bound);
    let mut digits = vec![-b; l];
    let mut point: Vec<Rational> = digits.iter().map(|&d| Rational::from_integer(d.into())).collect();
    let mut found = Vec::new();
    loop {
        let mut ok = true;
        for p in system.polys() {
            if !p.evaluate(&point)?.is_zero() {
                ok = false;
                break;
            }
        }
        if ok {
            found.push(point.clone());
        }
        let mut i = 0;
        loop {
            if i == l {
                return Ok(found);
            }
            if digits[i] < b {
                digits[i] += 1;
                point[i] = Rational::from_integer(digits[i].into());
                break;
            }
            digits[i] = -b;
            point[i] = Rational::from_integer((-b).into());
            i += 1;
        }
    }
}
