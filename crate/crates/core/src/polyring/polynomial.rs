use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Monomial, MonomialOrder, Rational, VarContext};
use crate::error::{Error, Result};

/// A polynomial over the rationals in an explicit variable context.
///
/// Terms are stored without zero coefficients and sorted by descending
/// degrevlex, so structural equality is mathematical equality.
#[derive(Clone)]
pub struct Polynomial {
    ctx: Arc<VarContext>,
    terms: Vec<(Monomial, Rational)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

fn same_context(a: &Arc<VarContext>, b: &Arc<VarContext>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn canonical_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    MonomialOrder::DegRevLex.cmp(b, a)
}

impl Polynomial {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ctx: &Arc<VarContext>, c: Rational) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::one(ctx.len()), c)]
        };
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn var(ctx: &Arc<VarContext>, name: &str) -> Result<Self> {
        let i = ctx.require(name)?;
        Ok(Self::var_at(ctx, i))
    }

    pub fn var_at(ctx: &Arc<VarContext>, i: usize) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            terms: vec![(Monomial::var(ctx.len(), i, 1), Rational::one())],
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and
    /// dropping zeros.
    pub fn from_terms(
        ctx: &Arc<VarContext>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ctx.len(), "monomial arity does not match context");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(ctx, acc)
    }

    fn from_map(ctx: &Arc<VarContext>, acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` if the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_nonzero_constant(&self) -> bool {
        matches!(self.terms.as_slice(), [(m, _)] if m.is_one())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(t, _)| canonical_cmp(t, m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// Leading term with respect to `order`.
    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &Rational)> {
        if order == MonomialOrder::DegRevLex {
            return self.terms.first().map(|(m, c)| (m, c));
        }
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(&a.0, &b.0))
            .map(|(m, c)| (m, c))
    }

    /// Indices of variables that occur with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.ctx.len()];
        for (m, _) in &self.terms {
            for (i, e) in m.exponents().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        (0..used.len()).filter(|&i| used[i]).collect()
    }

    fn check_ctx(&self, other: &Polynomial) -> Result<()> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        let sign = |c: &Rational| if negate_other { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match canonical_cmp(&a[i].0, &b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0.clone(), sign(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + sign(&b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        Polynomial {
            ctx: self.ctx.clone(),
            terms: out,
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ctx(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ctx(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ctx(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ctx));
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Ok(Self::from_map(&self.ctx, acc))
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by the monomial `m` and scalar `c`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        // Multiplying by a monomial preserves the relative term order.
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `self(maps[0], …, maps[k-1])` where `k` is the size of `self`'s
    /// context. The result lives in the (shared) context of `maps`.
    pub fn compose(&self, maps: &[Polynomial]) -> Result<Polynomial> {
        if maps.len() != self.ctx.len() {
            return Err(Error::Arity {
                expected: self.ctx.len(),
                found: maps.len(),
            });
        }
        let Some(first) = maps.first() else {
            // Constant polynomial in the empty context.
            return Ok(self.clone());
        };
        let target = first.ctx.clone();
        if maps.iter().any(|p| !same_context(&p.ctx, &target)) {
            return Err(Error::ContextMismatch);
        }
        let mut powers = PowerCache::new(maps);
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut prod = Polynomial::constant(&target, c.clone());
            for (i, e) in m.exponents().enumerate() {
                if e > 0 {
                    prod = &prod * powers.get(i, e);
                }
            }
            for (tm, tc) in prod.terms {
                *acc.entry(tm).or_insert_with(Rational::zero) += tc;
            }
        }
        Ok(Self::from_map(&target, acc))
    }

    /// Exact value at `point`, given in context order.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.ctx.len() {
            let missing = self.ctx.names().get(point.len()).cloned().unwrap_or_default();
            return Err(if point.len() < self.ctx.len() {
                Error::MissingBinding(missing)
            } else {
                Error::Arity {
                    expected: self.ctx.len(),
                    found: point.len(),
                }
            });
        }
        let mut cache: Vec<Vec<Rational>> = point.iter().map(|v| vec![Rational::one(), v.clone()]).collect();
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, e) in m.exponents().enumerate() {
                if e > 0 {
                    let pw = &mut cache[i];
                    while pw.len() <= e as usize {
                        let next = pw.last().unwrap() * &pw[1];
                        pw.push(next);
                    }
                    v *= &pw[e as usize];
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Evaluates with bindings given by name; every variable must be bound.
    pub fn evaluate_named(&self, bindings: &[(&str, Rational)]) -> Result<Rational> {
        let mut point = vec![None; self.ctx.len()];
        for (name, v) in bindings {
            point[self.ctx.require(name)?] = Some(v.clone());
        }
        let point: Vec<Rational> = point
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::MissingBinding(self.ctx.name(i).to_string())))
            .collect::<Result<_>>()?;
        self.evaluate(&point)
    }

    /// Binds some variables to rationals. The result lives in the context of
    /// the remaining (unbound) variables, blocks preserved.
    pub fn substitute(&self, bindings: &[(&str, Rational)]) -> Result<Polynomial> {
        let mut values: Vec<Option<Rational>> = vec![None; self.ctx.len()];
        for (name, v) in bindings {
            values[self.ctx.require(name)?] = Some(v.clone());
        }
        let keep: Vec<usize> = (0..self.ctx.len()).filter(|&i| values[i].is_none()).collect();
        let ctx = VarContext::from_blocks(
            keep.iter().map(|&i| (self.ctx.name(i).to_string(), self.ctx.block(i))),
        )?;
        Ok(self.substitute_into(&values, &ctx, &keep))
    }

    /// Substitution where the caller supplies the target context; `keep[k]`
    /// is the source index of target variable `k`.
    pub(crate) fn substitute_into(
        &self,
        values: &[Option<Rational>],
        ctx: &Arc<VarContext>,
        keep: &[usize],
    ) -> Polynomial {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        let mut pow_cache: HashMap<(usize, u32), Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            for (i, e) in m.exponents().enumerate() {
                if e == 0 {
                    continue;
                }
                if let Some(v) = &values[i] {
                    let p = pow_cache
                        .entry((i, e))
                        .or_insert_with(|| num_traits::pow(v.clone(), e as usize));
                    coeff *= &*p;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            let exps: Vec<u32> = keep.iter().map(|&i| m.exponent(i)).collect();
            *acc.entry(Monomial::from_exponents(&exps)).or_insert_with(Rational::zero) += coeff;
        }
        Self::from_map(ctx, acc)
    }

    /// Re-indexes into a context that contains every variable of this one.
    pub fn extend_context(&self, new: &Arc<VarContext>) -> Result<Polynomial> {
        if same_context(&self.ctx, new) {
            return Ok(self.clone());
        }
        let map = self.ctx.embedding_into(new)?;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.embed(&map, new.len()), c.clone()));
        // Embedding can permute variables, so re-sort.
        Ok(Self::from_terms(new, terms))
    }

    /// Moves into a smaller context; fails if a dropped variable is used.
    pub fn restrict_context(&self, new: &Arc<VarContext>) -> Result<Polynomial> {
        let mut map = vec![None; self.ctx.len()];
        for i in self.support() {
            let name = self.ctx.name(i);
            map[i] = Some(new.index_of(name).ok_or_else(|| Error::NotEmbeddable(name.to_string()))?);
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0u32; new.len()];
            for (i, e) in m.exponents().enumerate() {
                if e > 0 {
                    exps[map[i].unwrap()] = e;
                }
            }
            (Monomial::from_exponents(&exps), c.clone())
        });
        Ok(Self::from_terms(new, terms))
    }

    /// Least common multiple of all coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()))
    }

    /// Coefficients scaled to coprime integers (content 1), in term order.
    pub fn integer_coefficients(&self) -> Vec<BigInt> {
        let d = self.denominator_lcm();
        let ints: Vec<BigInt> = self
            .terms
            .iter()
            .map(|(_, c)| (c * Rational::from_integer(d.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() || g.is_one() {
            ints
        } else {
            ints.into_iter().map(|c| c / &g).collect()
        }
    }

    /// Unit multiple with coprime integer coefficients and a positive
    /// degrevlex-leading coefficient.
    pub fn normalized(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut ints = self.integer_coefficients();
        if ints[0].is_negative() {
            ints.iter_mut().for_each(|c| *c = -c.clone());
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .zip(ints)
                .map(|((m, _), c)| (m.clone(), Rational::from_integer(c)))
                .collect(),
        }
    }

    /// Divides by the degrevlex-leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, lc)) => self.scale(&lc.recip()),
        }
    }

    /// True if `self = c * other` for some nonzero rational `c`.
    pub fn is_unit_multiple_of(&self, other: &Polynomial) -> bool {
        self.is_zero() == other.is_zero() && self.monic() == other.monic()
    }
}

/// Caches powers of the substituted polynomials during composition.
struct PowerCache<'a> {
    maps: &'a [Polynomial],
    powers: Vec<Vec<Polynomial>>,
}

impl<'a> PowerCache<'a> {
    fn new(maps: &'a [Polynomial]) -> Self {
        PowerCache {
            maps,
            powers: maps.iter().map(|p| vec![Polynomial::one(&p.ctx), p.clone()]).collect(),
        }
    }

    fn get(&mut self, i: usize, e: u32) -> &Polynomial {
        let e = e as usize;
        while self.powers[i].len() <= e {
            let next = self.powers[i].last().unwrap() * &self.maps[i];
            self.powers[i].push(next);
        }
        &self.powers[i][e]
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $call:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$call(rhs).expect("polynomial context mismatch")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, e) in m.exponents().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.ctx.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.ctx.name(i), e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_polynomial, rat};

    fn ctx2() -> Arc<VarContext> {
        VarContext::new(&["x1", "x2"]).unwrap()
    }

    fn p(ctx: &Arc<VarContext>, s: &str) -> Polynomial {
        parse_polynomial(s, ctx).unwrap()
    }

    #[test]
    fn add_examples() {
        let c = ctx2();
        assert!((p(&c, "x1") + p(&c, "-x1")).is_zero());
        let g = p(&c, "x1^2 - x2^2 + x1*x2");
        assert_eq!(&g + &Polynomial::zero(&c), g);
        assert_eq!(p(&c, "2*x1 - 3*x2") + p(&c, "x1 + x2"), p(&c, "3*x1 - 2*x2"));
    }

    #[test]
    fn mul_examples() {
        let c = ctx2();
        assert!((p(&c, "x1") * Polynomial::zero(&c)).is_zero());
        assert_eq!(p(&c, "x1 + x2") * p(&c, "x1 - x2"), p(&c, "x1^2 - x2^2"));
        let cz = VarContext::new(&["x1", "x2", "z"]).unwrap();
        assert_eq!(p(&cz, "z") * p(&cz, "x2^2 - x1"), p(&cz, "z*x2^2 - z*x1"));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = p(&ctx2(), "x1");
        let b = p(&VarContext::new(&["x1"]).unwrap(), "x1");
        assert_eq!(a.try_add(&b).unwrap_err(), Error::ContextMismatch);
        assert_eq!(a.try_mul(&b).unwrap_err(), Error::ContextMismatch);
    }

    #[test]
    fn compose_examples() {
        let c = ctx2();
        let g = p(&c, "x1^2 - x2^2 + x1*x2");
        let f = [p(&c, "2*x1 - 3*x2"), p(&c, "x1 + x2")];
        let gf = g.compose(&f).unwrap();
        assert_eq!(gf, p(&c, "5*x1^2 - 15*x1*x2 + 5*x2^2"));
        assert_eq!(gf.compose(&f).unwrap(), p(&c, "-5*x1^2 - 35*x1*x2 + 95*x2^2"));
        let id = [p(&c, "x1"), p(&c, "x2")];
        assert_eq!(g.compose(&id).unwrap(), g);
        assert!(matches!(g.compose(&f[..1]), Err(Error::Arity { .. })));
    }

    #[test]
    fn substitute_examples() {
        let c = VarContext::new(&["x1", "x2", "z"]).unwrap();
        let q = p(&c, "z*(x2^2 - x1)");
        let r = q
            .substitute(&[("x1", rat(1)), ("x2", rat(1)), ("z", rat(1))])
            .unwrap();
        assert!(r.is_zero());
        assert_eq!(r.context().len(), 0);
        let one = VarContext::new(&["x1"]).unwrap();
        assert_eq!(p(&one, "x1^2").substitute(&[("x1", rat(3))]).unwrap().as_constant(), Some(rat(9)));
        assert_eq!(
            q.substitute(&[("w", rat(1))]).unwrap_err(),
            Error::UnknownVariable("w".into())
        );
        let partial = q.substitute(&[("z", rat(2))]).unwrap();
        assert_eq!(partial.to_string(), "2*x2^2 - 2*x1");
    }

    #[test]
    fn evaluate_examples() {
        let c = ctx2();
        assert_eq!(p(&c, "x2^2 - x1").evaluate(&[rat(1), rat(1)]).unwrap(), rat(0));
        assert_eq!(p(&c, "x1^2 - x2^2 + x1*x2").evaluate(&[rat(2), rat(1)]).unwrap(), rat(5));
        let y = VarContext::new(&["y1", "y2", "y3", "y4", "y5"]).unwrap();
        let p1 = p(&y, "(y3 + y4)^2 - y1 - y2");
        let b: Vec<Rational> = [-3, 3, 1, -1, 0].iter().map(|&v| rat(v)).collect();
        assert_eq!(p1.evaluate(&b).unwrap(), rat(0));
        assert_eq!(
            p1.evaluate(&b[..2]).unwrap_err(),
            Error::MissingBinding("y3".into())
        );
    }

    #[test]
    fn extend_context_examples() {
        let small = VarContext::new(&["x1", "x2", "x3"]).unwrap();
        let big = VarContext::new(&["x1", "x2", "x3", "y1", "z"]).unwrap();
        let g = p(&small, "x2^2 - x1");
        let e = g.extend_context(&big).unwrap();
        assert_eq!(e, p(&big, "x2^2 - x1"));
        assert!(Polynomial::zero(&small).extend_context(&big).unwrap().is_zero());
        let z = Polynomial::var(&big, "z").unwrap();
        assert_eq!(&z * &e, p(&big, "z*x2^2 - z*x1"));
        assert_eq!(
            e.extend_context(&small).unwrap_err(),
            Error::NotEmbeddable("y1".into())
        );
        assert_eq!(e.restrict_context(&small).unwrap(), g);
    }

    #[test]
    fn normalization_clears_denominators() {
        let c = ctx2();
        let q = p(&c, "-1/2*x1^2 + 3/4*x2");
        assert_eq!(q.normalized(), p(&c, "2*x1^2 - 3*x2"));
        assert!(q.is_unit_multiple_of(&p(&c, "2*x1^2 - 3*x2")));
    }

    #[test]
    fn display_is_readable() {
        let c = ctx2();
        assert_eq!(p(&c, "5*x1^2 - 15*x1*x2 + 5*x2^2").to_string(), "5*x1^2 - 15*x1*x2 + 5*x2^2");
        assert_eq!(p(&c, "-x1 + 1/2").to_string(), "-x1 + 1/2");
        assert_eq!(Polynomial::zero(&c).to_string(), "0");
    }
}
