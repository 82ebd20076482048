use std::sync::Arc;

use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::error::Result;
use crate::polyring::{Polynomial, Rational, VarBlock, VarContext};

use super::invariant_set::invariant_set;
use super::template::{build_augmented_map, InvariantSpec, LoopTemplate};

/// Polynomials `P_1, …, P_s` in the template coefficients whose common zero
/// set is exactly the set of coefficient vectors `b` for which every target
/// invariant holds on the loop instantiated with `b`.
#[derive(Clone, Debug)]
pub struct SynthesisSystem {
    context: Arc<VarContext>,
    polys: Vec<Polynomial>,
    origins: Vec<usize>,
    invariant_polys: Vec<Polynomial>,
    rounds: usize,
}

impl SynthesisSystem {
    /// A system given directly by its polynomials (all in `context`).
    pub fn from_polys(context: &Arc<VarContext>, polys: Vec<Polynomial>) -> Self {
        SynthesisSystem {
            context: context.clone(),
            origins: (0..polys.len()).collect(),
            invariant_polys: Vec::new(),
            rounds: 0,
            polys,
        }
    }

    /// Context of the coefficient variables `y`.
    pub fn context(&self) -> &Arc<VarContext> {
        &self.context
    }

    /// The nonzero output polynomials, normalised to coprime integer
    /// coefficients with positive leading coefficient.
    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// For each output polynomial, the index of the invariant-set polynomial
    /// it was obtained from.
    pub fn origins(&self) -> &[usize] {
        &self.origins
    }

    /// The invariant-set polynomials `Q_i(x, y, z)` before substitution.
    pub fn invariant_polys(&self) -> &[Polynomial] {
        &self.invariant_polys
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn num_vars(&self) -> usize {
        self.context.len()
    }

    /// Whether `b` is a common root of the system.
    pub fn is_satisfied_by(&self, b: &[Rational]) -> Result<bool> {
        for p in &self.polys {
            if !p.evaluate(b)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether some output polynomial is a nonzero constant.
    pub fn is_trivially_inconsistent(&self) -> bool {
        self.polys.iter().any(Polynomial::is_nonzero_constant)
    }
}

/// Computes the polynomial system whose solutions are all coefficient
/// vectors making `inv` hold for the template.
pub fn generate_loops(t: &LoopTemplate, inv: &InvariantSpec, budget: &Budget) -> Result<SynthesisSystem> {
    let map = build_augmented_map(t)?;
    let ctx = &map.context;
    let z = Polynomial::var_at(ctx, map.guard_var());
    let zg = inv
        .polys()
        .iter()
        .map(|g| Ok(&z * &g.extend_context(ctx)?))
        .collect::<Result<Vec<_>>>()?;
    let set = invariant_set(&zg, &map.components, budget)?;

    // x ↦ a, z ↦ 1; the coefficient block stays symbolic.
    let mut values: Vec<Option<Rational>> = vec![None; ctx.len()];
    for (i, a) in map.program_vars().into_iter().zip(t.initial()) {
        values[i] = Some(a.clone());
    }
    values[map.guard_var()] = Some(Rational::one());
    let keep = map.coefficient_vars();
    let y_ctx = VarContext::from_blocks(
        keep.iter()
            .map(|&i| (ctx.name(i).to_string(), VarBlock::Coefficient)),
    )?;

    let mut polys = Vec::new();
    let mut origins = Vec::new();
    for (i, q) in set.polys.iter().enumerate() {
        let p = q.substitute_into(&values, &y_ctx, &keep);
        if !p.is_zero() {
            polys.push(p.normalized());
            origins.push(i);
        }
    }
    Ok(SynthesisSystem {
        context: y_ctx,
        polys,
        origins,
        invariant_polys: set.polys,
        rounds: set.rounds,
    })
}
