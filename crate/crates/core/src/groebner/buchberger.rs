//! Buchberger's algorithm with the normal selection strategy and the
//! Gebauer–Möller installation of the product and chain criteria.

use crate::budget::Budget;
use crate::error::Result;
use crate::polyring::{Monomial, MonomialOrder};

use super::intpoly::{reduce, s_poly, IntPoly, Reducer};

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

pub(crate) enum Completion {
    /// Reduced basis, primitive integer generators sorted by ascending
    /// leading monomial.
    Basis(Vec<IntPoly>),
    /// The ideal contains a nonzero constant.
    Unit,
}

struct Engine<'b> {
    order: MonomialOrder,
    elems: Vec<IntPoly>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    budget: &'b Budget,
}

impl Engine<'_> {
    fn reduce_by_active(&self, p: &IntPoly) -> Result<IntPoly> {
        let reducers: Vec<Reducer<'_>> = self
            .elems
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(e, _)| Reducer::new(e))
            .collect();
        reduce(p, &reducers, self.order, true, self.budget)
    }

    fn update(&mut self, h: IntPoly) {
        let k = self.elems.len();
        let lm_h = h.lm().clone();
        self.elems.push(h);
        self.active.push(true);

        // Candidate pairs (h, g) for every active g.
        let mut cands: Vec<(usize, Monomial, bool)> = (0..k)
            .filter(|&g| self.active[g])
            .map(|g| {
                let lm_g = self.elems[g].lm();
                (g, lm_h.lcm(lm_g), lm_h.is_coprime(lm_g))
            })
            .collect();

        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        while let Some((g1, lcm1, coprime)) = cands.pop() {
            let dominated = !coprime
                && (cands.iter().any(|(_, l, _)| l.divides(&lcm1))
                    || kept.iter().any(|(_, l, _)| l.divides(&lcm1)));
            if !dominated {
                kept.push((g1, lcm1, coprime));
            }
        }
        // Product criterion.
        kept.retain(|(_, _, coprime)| !coprime);

        // Chain criterion on the existing pairs.
        let elems = &self.elems;
        self.pairs.retain(|p| {
            !lm_h.divides(&p.lcm)
                || elems[p.i].lm().lcm(&lm_h) == p.lcm
                || lm_h.lcm(elems[p.j].lm()) == p.lcm
        });
        self.pairs
            .extend(kept.into_iter().map(|(g, lcm, _)| Pair { i: g, j: k, lcm }));

        for g in 0..k {
            if self.active[g] && lm_h.divides(self.elems[g].lm()) {
                self.active[g] = false;
            }
        }
    }

    fn select(&mut self) -> Option<Pair> {
        let order = self.order;
        let best = (0..self.pairs.len()).min_by(|&a, &b| {
            order
                .cmp(&self.pairs[a].lcm, &self.pairs[b].lcm)
                .then_with(|| (self.pairs[a].j, self.pairs[a].i).cmp(&(self.pairs[b].j, self.pairs[b].i)))
        })?;
        Some(self.pairs.swap_remove(best))
    }

    fn finish(self) -> Result<Vec<IntPoly>> {
        let order = self.order;
        let mut basis: Vec<IntPoly> = self
            .elems
            .into_iter()
            .zip(self.active)
            .filter_map(|(e, a)| a.then_some(e))
            .collect();
        basis.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
        let mut minimal: Vec<IntPoly> = Vec::with_capacity(basis.len());
        for g in basis {
            if !minimal.iter().any(|m| m.lm().divides(g.lm())) {
                minimal.push(g);
            }
        }
        let mut reduced = Vec::with_capacity(minimal.len());
        for (i, g) in minimal.iter().enumerate() {
            let others: Vec<Reducer<'_>> = minimal
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, e)| Reducer::new(e))
                .collect();
            reduced.push(reduce(g, &others, order, true, self.budget)?);
        }
        Ok(reduced)
    }
}

/// Completes `seed ∪ new` to a reduced Gröbner basis. `seed` must already be
/// a Gröbner basis for `order`, so only pairs involving `new` are formed.
pub(crate) fn complete(
    seed: &[IntPoly],
    new: &[IntPoly],
    order: MonomialOrder,
    budget: &Budget,
) -> Result<Completion> {
    let mut engine = Engine {
        order,
        elems: seed.to_vec(),
        active: vec![true; seed.len()],
        pairs: Vec::new(),
        budget,
    };
    if seed.iter().any(IntPoly::is_constant) {
        return Ok(Completion::Unit);
    }
    for f in new {
        if f.is_zero() {
            continue;
        }
        let h = engine.reduce_by_active(f)?;
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(Completion::Unit);
        }
        engine.update(h);
    }
    while let Some(pair) = engine.select() {
        budget.check_deadline()?;
        let s = s_poly(&engine.elems[pair.i], &engine.elems[pair.j], order);
        if s.is_zero() {
            continue;
        }
        let h = engine.reduce_by_active(&s)?;
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(Completion::Unit);
        }
        engine.update(h);
    }
    engine.finish().map(Completion::Basis)
}
