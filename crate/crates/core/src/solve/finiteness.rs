use crate::budget::Budget;
use crate::groebner::{is_zero_dimensional, GroebnerBasis};
use crate::polyring::MonomialOrder;
use crate::synthesis::SynthesisSystem;

/// Whether the complex variety of a synthesis system is a finite set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Finiteness {
    Finite,
    Infinite,
    /// The Gröbner computation ran out of budget.
    Unknown,
}

impl Finiteness {
    pub fn label(&self) -> &'static str {
        match self {
            Finiteness::Finite => "finite",
            Finiteness::Infinite => "infinite",
            Finiteness::Unknown => "unknown",
        }
    }
}

/// Classifies the variety via a degrevlex basis. An empty variety counts as
/// finite. Any error other than budget exhaustion is propagated.
pub fn classify_finiteness(system: &SynthesisSystem, budget: &Budget) -> crate::Result<Finiteness> {
    let l = system.num_vars();
    let polys: Vec<_> = system.polys().iter().filter(|p| !p.is_zero()).cloned().collect();
    if polys.is_empty() {
        return Ok(if l == 0 { Finiteness::Finite } else { Finiteness::Infinite });
    }
    match GroebnerBasis::compute(system.context(), &polys, MonomialOrder::DegRevLex, budget) {
        Ok(gb) => {
            let vars: Vec<usize> = (0..l).collect();
            Ok(if is_zero_dimensional(&gb, &vars) {
                Finiteness::Finite
            } else {
                Finiteness::Infinite
            })
        }
        Err(e) if e.is_budget_exceeded() => Ok(Finiteness::Unknown),
        Err(e) => Err(e),
    }
}
