//! Radical membership through the Rabinowitsch trick:
//! `f ∈ √⟨S⟩  ⇔  1 ∈ ⟨S, 1 − t·f⟩` for a fresh variable `t`.

use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::polyring::{MonomialOrder, Polynomial, VarBlock, VarContext};

use super::buchberger::{complete, Completion};
use super::intpoly::IntPoly;
use super::GroebnerBasis;

/// Answers radical-membership queries against a fixed `⟨S⟩`. The basis of
/// `⟨S⟩` is computed once, in the context extended by `t`, and every query
/// only completes the pairs that involve `1 − t·f`.
#[derive(Clone, Debug)]
pub struct RadicalOracle {
    source: Arc<VarContext>,
    extended: Arc<VarContext>,
    basis: GroebnerBasis,
}

impl RadicalOracle {
    pub fn new(ctx: &Arc<VarContext>, gens: &[Polynomial], order: MonomialOrder, budget: &Budget) -> Result<Self> {
        let t = ctx.fresh_name("t");
        let extended = ctx.with_var(&t, VarBlock::Aux)?;
        let lifted = lift_all(gens, ctx, &extended)?;
        let basis = GroebnerBasis::compute(&extended, &lifted, order, budget)?;
        Ok(RadicalOracle {
            source: ctx.clone(),
            extended,
            basis,
        })
    }

    /// Oracle for `⟨S ∪ more⟩`.
    pub fn extend(&self, more: &[Polynomial], budget: &Budget) -> Result<Self> {
        let lifted = lift_all(more, &self.source, &self.extended)?;
        Ok(RadicalOracle {
            source: self.source.clone(),
            extended: self.extended.clone(),
            basis: self.basis.extend(&lifted, budget)?,
        })
    }

    /// Basis of `⟨S⟩` in the context extended by the auxiliary variable.
    pub fn basis(&self) -> &GroebnerBasis {
        &self.basis
    }

    pub fn contains(&self, f: &Polynomial, budget: &Budget) -> Result<bool> {
        if f.context() != &self.source {
            return Err(Error::ContextMismatch);
        }
        let lifted = f.extend_context(&self.extended)?;
        // Ideal membership already implies radical membership.
        if self.basis.reduce_scaled(&lifted, budget)?.is_zero() {
            return Ok(true);
        }
        let t = Polynomial::var_at(&self.extended, self.extended.len() - 1);
        let rabinowitsch = &Polynomial::one(&self.extended) - &(&t * &lifted);
        let order = self.basis.order();
        let added = [IntPoly::from_poly(&rabinowitsch, order)];
        Ok(matches!(
            complete(&self.basis.int_form, &added, order, budget)?,
            Completion::Unit
        ))
    }

    /// True iff every member of `fs` lies in the radical; stops at the first
    /// polynomial that does not.
    pub fn contains_all(&self, fs: &[Polynomial], budget: &Budget) -> Result<bool> {
        for f in fs {
            if !self.contains(f, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn lift_all(ps: &[Polynomial], source: &Arc<VarContext>, target: &Arc<VarContext>) -> Result<Vec<Polynomial>> {
    ps.iter()
        .map(|p| {
            if p.context() != source {
                return Err(Error::ContextMismatch);
            }
            p.extend_context(target)
        })
        .collect()
}

fn shared_context(f: Option<&Polynomial>, s: &[Polynomial]) -> Option<Arc<VarContext>> {
    s.first().or(f).map(|p| p.context().clone())
}

/// Whether `f ∈ √⟨S⟩`.
pub fn in_radical(f: &Polynomial, s: &[Polynomial]) -> Result<bool> {
    let ctx = shared_context(Some(f), s).expect("f provides a context");
    let budget = Budget::unlimited();
    RadicalOracle::new(&ctx, s, MonomialOrder::DegRevLex, &budget)?.contains(f, &budget)
}

/// Whether every member of `fs` lies in `√⟨S⟩`; the basis of `⟨S⟩` is shared.
pub fn all_in_radical(fs: &[Polynomial], s: &[Polynomial]) -> Result<bool> {
    let Some(ctx) = shared_context(fs.first(), s) else {
        return Ok(true);
    };
    if fs.is_empty() {
        return Ok(true);
    }
    let budget = Budget::unlimited();
    RadicalOracle::new(&ctx, s, MonomialOrder::DegRevLex, &budget)?.contains_all(fs, &budget)
}
