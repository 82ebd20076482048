

use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::error::Result;
use crate::polyring::{Polynomial, Rational, VarBlock, VarContext};

use super::invariant_set::run;
use super::template::{ConcreteLoop, InvariantSpec};

/// Exact invariant test: `g` holds on `L(a, h, F)` iff `(a, 1)` lies in the
/// invariant set of `G_h(x, z) = (F(x), z·h(x))` and `X = V(z·g_1, …, z·g_m)`.
///
/// Round `k` of the fixed point adds `z·g∘G_h^k`, whose value at `(a, 1)` is
/// `z·g` at the `k`-th orbit point. That value is checked first, so a failing
/// invariant is rejected without composing further.
pub fn check_invariants(l: &ConcreteLoop, inv: &InvariantSpec, budget: &Budget) -> Result<bool> {
    let x = l.context();
    let z_name = x.fresh_name("z");
    let ctx = VarContext::from_blocks(
        x.names()
            .iter()
            .map(|n| (n.clone(), VarBlock::Program))
            .chain(std::iter::once((z_name, VarBlock::Guard))),
    )?;
    let n = x.len();
    let z = Polynomial::var_at(&ctx, n);
    let lift = |p: &Polynomial| p.extend_context(&ctx);

    let mut map = l.update().iter().map(lift).collect::<Result<Vec<_>>>()?;
    map.push(&z * &lift(l.guard())?);
    let zg = inv
        .polys()
        .iter()
        .map(|g| Ok(&z * &lift(g)?))
        .collect::<Result<Vec<_>>>()?;

    let start: Vec<Rational> = l
        .initial()
        .iter()
        .cloned()
        .chain(std::iter::once(Rational::one()))
        .collect();
    let mut state = start.clone();
    let probe = |k: usize| -> Result<bool> {
        if k > 0 {
            state = map.iter().map(|f| f.evaluate(&state)).collect::<Result<_>>()?;
        }
        for q in &zg {
            if !q.evaluate(&state)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let Some(set) = run(&zg, &map, budget, probe)? else {
        return Ok(false);
    };
    for q in &set.polys {
        if !q.evaluate(&start)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of a bounded simulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Simulation {
    /// Every visited state satisfied the invariants.
    Holds { steps: usize, terminated: bool },
    /// The invariants failed at the state reached after `step` iterations.
    Violated { step: usize },
}

impl Simulation {
    pub fn holds(&self) -> bool {
        matches!(self, Simulation::Holds { .. })
    }
}

/// Runs the loop from its initial point for at most `max_steps` iterations,
/// checking the invariants on every visited state including the one where
/// the guard vanishes. A `Holds` result is evidence, not proof.
///
/// Stops early once a state repeats, since the orbit is then periodic and
/// every later state has already been checked.
pub fn simulate(l: &ConcreteLoop, inv: &InvariantSpec, max_steps: usize) -> Result<Simulation> {
    let mut state = l.initial().to_vec();
    let mut seen: Vec<Vec<Rational>> = Vec::new();
    for step in 0..=max_steps {
        if !inv.holds_at(&state)? {
            return Ok(Simulation::Violated { step });
        }
        if l.guard().evaluate(&state)?.is_zero() {
            return Ok(Simulation::Holds {
                steps: step,
                terminated: true,
            });
        }
        if step == max_steps || seen.contains(&state) {
            return Ok(Simulation::Holds {
                steps: step,
                terminated: false,
            });
        }
        let next = l.step(&state)?;
        seen.push(std::mem::replace(&mut state, next));
    }
    unreachable!("loop returns on the final step")
}

