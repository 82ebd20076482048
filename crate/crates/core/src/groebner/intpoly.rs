//! Integer-coefficient polynomials sorted by a fixed monomial order, used
//! inside Buchberger's algorithm. Coefficients are kept primitive; reduction
//! is fraction-free.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::budget::Budget;
use crate::error::Result;
use crate::polyring::{Monomial, MonomialOrder, Polynomial, Rational, VarContext};

pub(crate) type Term = (Monomial, BigInt);

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntPoly {
    /// Descending under the order the polynomial was built for.
    pub terms: Vec<Term>,
}

impl IntPoly {
    pub fn from_poly(p: &Polynomial, order: MonomialOrder) -> IntPoly {
        let ints = p.integer_coefficients();
        let mut terms: Vec<Term> = p
            .terms()
            .iter()
            .zip(ints)
            .map(|((m, _), c)| (m.clone(), c))
            .collect();
        if order != MonomialOrder::DegRevLex {
            terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        }
        let mut ip = IntPoly { terms };
        ip.normalize_sign();
        ip
    }

    /// Monic rational polynomial with the same leading monomial.
    pub fn to_monic(&self, ctx: &Arc<VarContext>) -> Polynomial {
        let lc = Rational::from_integer(self.terms[0].1.clone());
        Polynomial::from_terms(
            ctx,
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), Rational::from_integer(c.clone()) / &lc)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    pub fn is_constant(&self) -> bool {
        !self.terms.is_empty() && self.terms[0].0.is_one()
    }

    fn normalize_sign(&mut self) {
        if self.terms.first().is_some_and(|t| t.1.is_negative()) {
            for t in &mut self.terms {
                t.1 = -std::mem::take(&mut t.1);
            }
        }
    }

    pub fn make_primitive(&mut self) {
        let g = content(self.terms.iter().map(|t| &t.1));
        if !g.is_zero() && !g.is_one() {
            for t in &mut self.terms {
                t.1 = &t.1 / &g;
            }
        }
        self.normalize_sign();
    }
}

fn content<'a>(coeffs: impl Iterator<Item = &'a BigInt>) -> BigInt {
    let mut g = BigInt::zero();
    for c in coeffs {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// A reducer: a basis element with its leading data cached.
pub(crate) struct Reducer<'a> {
    pub poly: &'a IntPoly,
    pub mask: u64,
}

impl<'a> Reducer<'a> {
    pub fn new(poly: &'a IntPoly) -> Self {
        Reducer {
            mask: poly.lm().support_mask(),
            poly,
        }
    }
}

fn find_reducer<'a, 'b>(m: &Monomial, reducers: &'b [Reducer<'a>]) -> Option<&'b Reducer<'a>> {
    let mask = m.support_mask();
    reducers
        .iter()
        .find(|r| r.mask & !mask == 0 && r.poly.lm().divides(m))
}

/// `a * x - b * q * y`, with both inputs sorted descending.
fn combine(x: &[Term], a: &BigInt, y: &[Term], b: &BigInt, q: &Monomial, order: MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let mut i = 0;
    let a_is_one = a.is_one();
    let mut shifted = y.iter().map(|(m, c)| (m.mul(q), c));
    let mut next_y = shifted.next();
    while i < x.len() {
        let Some((ym, yc)) = &next_y else { break };
        match order.cmp(&x[i].0, ym) {
            Ordering::Greater => {
                out.push((x[i].0.clone(), if a_is_one { x[i].1.clone() } else { &x[i].1 * a }));
                i += 1;
            }
            Ordering::Less => {
                out.push((ym.clone(), -(b * *yc)));
                next_y = shifted.next();
            }
            Ordering::Equal => {
                let c = if a_is_one { x[i].1.clone() } else { &x[i].1 * a } - b * *yc;
                if !c.is_zero() {
                    out.push((x[i].0.clone(), c));
                }
                i += 1;
                next_y = shifted.next();
            }
        }
    }
    for t in &x[i..] {
        out.push((t.0.clone(), if a_is_one { t.1.clone() } else { &t.1 * a }));
    }
    while let Some((ym, yc)) = next_y {
        out.push((ym, -(b * yc)));
        next_y = shifted.next();
    }
    out
}

/// Fraction-free reduction of `p` by `reducers`. With `full = false` only the
/// leading term is reduced until it is irreducible. The result is a nonzero
/// integer multiple of the true remainder, made primitive.
pub(crate) fn reduce(
    p: &IntPoly,
    reducers: &[Reducer<'_>],
    order: MonomialOrder,
    full: bool,
    budget: &Budget,
) -> Result<IntPoly> {
    let mut rem: Vec<Term> = Vec::new();
    let mut cur: Vec<Term> = p.terms.clone();
    let mut start = 0;
    let mut steps = 0u32;
    while start < cur.len() {
        let m = &cur[start].0;
        match find_reducer(m, reducers) {
            Some(r) => {
                budget.tick()?;
                let g = r.poly;
                let q = g.lm().quotient_of(m).expect("reducer divides");
                let c = &cur[start].1;
                let d = c.gcd(g.lc());
                let a = g.lc() / &d;
                let b = c / &d;
                cur = combine(&cur[start + 1..], &a, &g.terms[1..], &b, &q, order);
                start = 0;
                if !a.is_one() {
                    for t in &mut rem {
                        t.1 *= &a;
                    }
                }
                steps += 1;
                if steps.is_multiple_of(16) {
                    let g = content(rem.iter().chain(cur.iter()).map(|t| &t.1));
                    if !g.is_zero() && !g.is_one() {
                        for t in rem.iter_mut().chain(cur.iter_mut()) {
                            t.1 = &t.1 / &g;
                        }
                    }
                }
            }
            None => {
                if !full {
                    rem.extend(cur.drain(start..));
                    break;
                }
                rem.push(cur[start].clone());
                start += 1;
            }
        }
    }
    let mut out = IntPoly { terms: rem };
    out.make_primitive();
    Ok(out)
}

/// Fraction-free S-polynomial of two primitive polynomials.
pub(crate) fn s_poly(f: &IntPoly, g: &IntPoly, order: MonomialOrder) -> IntPoly {
    let lcm = f.lm().lcm(g.lm());
    let qf = f.lm().quotient_of(&lcm).unwrap();
    let qg = g.lm().quotient_of(&lcm).unwrap();
    let d = f.lc().gcd(g.lc());
    let a = g.lc() / &d;
    let b = f.lc() / &d;
    let x: Vec<Term> = f.terms[1..].iter().map(|(m, c)| (m.mul(&qf), c.clone())).collect();
    let mut out = IntPoly {
        terms: combine(&x, &a, &g.terms[1..], &b, &qg, order),
    };
    out.make_primitive();
    out
}
