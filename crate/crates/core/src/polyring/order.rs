use std::cmp::Ordering;

use super::Monomial;

/// Multiplicative total orders on monomials of a fixed context. Variable `0`
/// is the largest variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic.
    #[default]
    DegRevLex,
    /// Pure lexicographic.
    Lex,
    /// Block order eliminating the trailing `block` variables: monomials are
    /// compared by degrevlex on the trailing block first, then by degrevlex on
    /// the remaining variables.
    Elimination { block: usize },
}

fn revlex(a: &[u16], b: &[u16]) -> Ordering {
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

fn degrevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| revlex(a, b))
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::DegRevLex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| revlex(a.raw(), b.raw())),
            MonomialOrder::Lex => a.raw().cmp(b.raw()),
            MonomialOrder::Elimination { block } => {
                let split = a.nvars().saturating_sub(block);
                let (a_keep, a_elim) = a.raw().split_at(split);
                let (b_keep, b_elim) = b.raw().split_at(split);
                degrevlex(a_elim, b_elim).then_with(|| degrevlex(a_keep, b_keep))
            }
        }
    }

    /// True for orders that compare total degree first, so every term of a
    /// polynomial has degree at most that of its leading monomial.
    pub fn is_graded(&self) -> bool {
        matches!(self, MonomialOrder::DegRevLex)
    }
}
