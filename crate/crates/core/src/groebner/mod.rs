//! Gröbner bases over the rationals: Buchberger completion, normal forms,
//! ideal and radical membership, and the zero-dimensionality test.

mod buchberger;
mod intpoly;
mod radical;

use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::polyring::{MonomialOrder, Polynomial, VarContext};

use buchberger::{complete, Completion};
use intpoly::{reduce, IntPoly, Reducer};

pub use radical::{all_in_radical, in_radical, RadicalOracle};

/// A reduced Gröbner basis: monic, interreduced generators sorted by
/// ascending leading monomial. The unit ideal has basis `{1}`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ctx: Arc<VarContext>,
    order: MonomialOrder,
    generators: Vec<Polynomial>,
    int_form: Vec<IntPoly>,
}

impl GroebnerBasis {
    /// Reduced basis of the ideal generated by `gens` (which may be empty).
    pub fn compute(
        ctx: &Arc<VarContext>,
        gens: &[Polynomial],
        order: MonomialOrder,
        budget: &Budget,
    ) -> Result<Self> {
        Self::from_seed(ctx, &[], gens, order, budget)
    }

    /// Basis of `⟨self ∪ more⟩`, reusing the pairs already known to reduce.
    pub fn extend(&self, more: &[Polynomial], budget: &Budget) -> Result<Self> {
        Self::from_seed(&self.ctx, &self.int_form, more, self.order, budget)
    }

    fn from_seed(
        ctx: &Arc<VarContext>,
        seed: &[IntPoly],
        gens: &[Polynomial],
        order: MonomialOrder,
        budget: &Budget,
    ) -> Result<Self> {
        let new = gens
            .iter()
            .map(|g| {
                if g.context() != ctx {
                    return Err(Error::ContextMismatch);
                }
                Ok(IntPoly::from_poly(g, order))
            })
            .collect::<Result<Vec<_>>>()?;
        let int_form = match complete(seed, &new, order, budget)? {
            Completion::Basis(b) => b,
            Completion::Unit => vec![IntPoly::from_poly(&Polynomial::one(ctx), order)],
        };
        let generators = int_form.iter().map(|g| g.to_monic(ctx)).collect();
        Ok(GroebnerBasis {
            ctx: ctx.clone(),
            order,
            generators,
            int_form,
        })
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.int_form.first().is_some_and(IntPoly::is_constant)
    }

    /// Normal form, up to a nonzero rational factor. Use [`normal_form`] for
    /// the exact remainder.
    pub(crate) fn reduce_scaled(&self, f: &Polynomial, budget: &Budget) -> Result<IntPoly> {
        let reducers: Vec<Reducer<'_>> = self.int_form.iter().map(Reducer::new).collect();
        reduce(&IntPoly::from_poly(f, self.order), &reducers, self.order, true, budget)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        in_ideal(f, self)
    }

    /// Buchberger's criterion: every S-polynomial of a generator pair reduces
    /// to zero. Exact rational computation, intended for verification.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let g = &self.generators;
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                let s = s_polynomial(&g[i], &g[j], self.order);
                if !normal_form(&s, g, self.order).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// The leading monomials, which generate the initial ideal.
    pub fn leading_monomials(&self) -> Vec<crate::polyring::Monomial> {
        self.generators
            .iter()
            .map(|g| g.leading_term(self.order).unwrap().0.clone())
            .collect()
    }

    /// Whether both bases generate the same ideal (reduced bases are unique).
    pub fn same_ideal(&self, other: &GroebnerBasis) -> bool {
        self.order == other.order && self.ctx == other.ctx && self.generators == other.generators
    }
}

/// Reduced Gröbner basis of `⟨gens⟩`. `gens` must be nonempty so the context
/// is known.
pub fn buchberger(gens: &[Polynomial], order: MonomialOrder) -> Result<GroebnerBasis> {
    buchberger_with_budget(gens, order, &Budget::unlimited())
}

pub fn buchberger_with_budget(
    gens: &[Polynomial],
    order: MonomialOrder,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    let first = gens.first().ok_or(Error::EmptySystem)?;
    GroebnerBasis::compute(&first.context().clone(), gens, order, budget)
}

/// Monic S-polynomial `lcm/LT(f)·f − lcm/LT(g)·g`.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Polynomial {
    let (Some((mf, cf)), Some((mg, cg))) = (f.leading_term(order), g.leading_term(order)) else {
        return Polynomial::zero(f.context());
    };
    let lcm = mf.lcm(mg);
    let a = f.mul_term(&mf.quotient_of(&lcm).unwrap(), &cf.recip());
    let b = g.mul_term(&mg.quotient_of(&lcm).unwrap(), &cg.recip());
    &a - &b
}

/// Multivariate division: returns quotients `q` and remainder `r` with
/// `f = Σ q_i·divisors_i + r` and no term of `r` divisible by any leading
/// term of the divisors.
pub fn divide(f: &Polynomial, divisors: &[Polynomial], order: MonomialOrder) -> (Vec<Polynomial>, Polynomial) {
    let ctx = f.context();
    let mut quotients = vec![Polynomial::zero(ctx); divisors.len()];
    let mut remainder = Polynomial::zero(ctx);
    let mut p = f.clone();
    let leads: Vec<_> = divisors
        .iter()
        .map(|d| d.leading_term(order).map(|(m, c)| (m.clone(), c.clone())))
        .collect();
    while let Some((m, c)) = p.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        let hit = leads.iter().enumerate().find_map(|(i, lt)| {
            let (lm, lc) = lt.as_ref()?;
            lm.quotient_of(&m).map(|q| (i, q, &c / lc))
        });
        match hit {
            Some((i, q, coeff)) => {
                let single = Polynomial::from_terms(ctx, [(q.clone(), coeff.clone())]);
                quotients[i] = &quotients[i] + &single;
                p = &p - &divisors[i].mul_term(&q, &coeff);
            }
            None => {
                let lt = Polynomial::from_terms(ctx, [(m, c)]);
                remainder = &remainder + &lt;
                p = &p - &lt;
            }
        }
    }
    (quotients, remainder)
}

/// Remainder of `f` under multivariate division by `g`.
pub fn normal_form(f: &Polynomial, g: &[Polynomial], order: MonomialOrder) -> Polynomial {
    divide(f, g, order).1
}

pub fn in_ideal(f: &Polynomial, basis: &GroebnerBasis) -> bool {
    basis
        .reduce_scaled(f, &Budget::unlimited())
        .expect("unlimited budget")
        .is_zero()
}

/// Finiteness test on the staircase: the variety of the ideal restricted to
/// `vars` is finite iff every variable in `vars` has a pure power among the
/// leading monomials. The unit ideal (empty variety) counts as
/// zero-dimensional.
pub fn is_zero_dimensional(basis: &GroebnerBasis, vars: &[usize]) -> bool {
    if basis.is_unit() {
        return true;
    }
    let leads = basis.leading_monomials();
    vars.iter()
        .all(|&v| leads.iter().any(|m| m.pure_power_var() == Some(v)))
}
