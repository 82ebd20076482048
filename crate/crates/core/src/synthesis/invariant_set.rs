use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groebner::RadicalOracle;
use crate::polyring::{MonomialOrder, Polynomial};

/// Polynomials whose common zero set is the invariant set of `(F, V(g))`:
/// the points of `V(g)` whose whole forward orbit under `F` stays in `V(g)`.
#[derive(Clone, Debug)]
pub struct InvariantSet {
    /// `g, g∘F, …, g∘F^(N-1)`, batch by batch, as produced.
    pub polys: Vec<Polynomial>,
    /// Number of radical checks performed (the last one succeeded).
    pub rounds: usize,
    /// `g∘F^N`, the batch found to lie in the radical of `polys`.
    pub last_batch: Vec<Polynomial>,
}

fn compose_all(batch: &[Polynomial], map: &[Polynomial], budget: &Budget) -> Result<Vec<Polynomial>> {
    batch
        .iter()
        .map(|g| {
            budget.check_deadline()?;
            g.compose(map)
        })
        .collect()
}

/// Fixed-point computation of the invariant set: keep appending
/// `g̃ ← g̃∘F` until the new batch lies in the radical of everything so far.
pub fn invariant_set(g: &[Polynomial], map: &[Polynomial], budget: &Budget) -> Result<InvariantSet> {
    run(g, map, budget, |_| Ok(true)).map(|r| r.expect("probe never aborts"))
}

/// The fixed point with a probe called as `probe(k)` before batch `k` is
/// composed (`k = 0` before anything else). Returning `false` aborts the run
/// with `Ok(None)`.
pub(crate) fn run(
    g: &[Polynomial],
    map: &[Polynomial],
    budget: &Budget,
    mut probe: impl FnMut(usize) -> Result<bool>,
) -> Result<Option<InvariantSet>> {
    let first = g
        .first()
        .ok_or_else(|| Error::InvalidTemplate("invariant set of an empty sequence".into()))?;
    let ctx = first.context().clone();
    if map.len() != ctx.len() {
        return Err(Error::Arity {
            expected: ctx.len(),
            found: map.len(),
        });
    }
    if !probe(0)? {
        return Ok(None);
    }
    let order = MonomialOrder::DegRevLex;
    let mut polys = g.to_vec();
    let mut oracle = RadicalOracle::new(&ctx, &polys, order, budget)?;
    let mut rounds = 0;
    let mut k = 1;
    loop {
        if !probe(k)? {
            return Ok(None);
        }
        let batch = compose_all(&polys[polys.len() - g.len()..], map, budget)?;
        rounds += 1;
        if oracle.contains_all(&batch, budget)? {
            return Ok(Some(InvariantSet {
                polys,
                rounds,
                last_batch: batch,
            }));
        }
        if rounds >= budget.max_rounds {
            return Err(Error::BudgetExceeded(format!(
                "invariant set did not stabilise within {} rounds",
                budget.max_rounds
            )));
        }
        oracle = oracle.extend(&batch, budget)?;
        polys.extend(batch);
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::in_radical;
    use crate::polyring::{parse_polynomial, VarContext};

    #[test]
    fn rotation_example_stops_after_two_checks() {
        let c = VarContext::new(&["x1", "x2"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &c).unwrap();
        let g = p("x1^2 - x2^2 + x1*x2");
        let f = [p("2*x1 - 3*x2"), p("x1 + x2")];
        let set = invariant_set(std::slice::from_ref(&g), &f, &Budget::unlimited()).unwrap();
        assert_eq!(set.rounds, 2);
        assert_eq!(set.polys, vec![g.clone(), g.compose(&f).unwrap()]);
        assert_eq!(set.last_batch, vec![p("-5*x1^2 - 35*x1*x2 + 95*x2^2")]);
        assert!(in_radical(&set.last_batch[0], &set.polys).unwrap());
    }

    #[test]
    fn identity_map_is_immediately_invariant() {
        let c = VarContext::new(&["x1", "x2"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &c).unwrap();
        let g = p("x1^2 - x2");
        let set = invariant_set(std::slice::from_ref(&g), &[p("x1"), p("x2")], &Budget::unlimited()).unwrap();
        assert_eq!(set.rounds, 1);
        assert_eq!(set.polys, vec![g]);
    }

    #[test]
    fn translation_empties_the_set() {
        let c = VarContext::new(&["x1"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &c).unwrap();
        let set = invariant_set(&[p("x1")], &[p("x1 + 1")], &Budget::unlimited()).unwrap();
        // x1 = 0 and x1 + 1 = 0 have no common root, so 1 is in the radical.
        assert_eq!(set.polys, vec![p("x1"), p("x1 + 1")]);
        assert_eq!(set.rounds, 2);
        assert!(in_radical(&Polynomial::one(&c), &set.polys).unwrap());
    }

    #[test]
    fn round_limit_is_reported() {
        let c = VarContext::new(&["x1", "x2"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &c).unwrap();
        let budget = Budget::unlimited().rounds(1);
        let err = invariant_set(&[p("x1^2 - x2^2 + x1*x2")], &[p("2*x1 - 3*x2"), p("x1 + x2")], &budget)
            .unwrap_err();
        assert!(err.is_budget_exceeded());
    }
}
