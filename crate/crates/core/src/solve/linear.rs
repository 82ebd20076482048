use num_traits::{One, Zero};

use crate::polyring::{Polynomial, Rational};
use crate::synthesis::SynthesisSystem;

/// Solution set of a system whose polynomials all have degree at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    /// `particular + span(kernel)`.
    Parametric {
        particular: Vec<Rational>,
        kernel: Vec<Vec<Rational>>,
    },
    Empty,
    /// Some polynomial has degree two or more.
    NotLinear,
}

impl LinearSolution {
    /// True when the solution set contains a point other than the origin.
    pub fn has_nonzero_point(&self) -> bool {
        match self {
            LinearSolution::Parametric { particular, kernel } => {
                !kernel.is_empty() || particular.iter().any(|v| !v.is_zero())
            }
            _ => false,
        }
    }
}

/// Exact Gaussian elimination over the rationals.
pub fn solve_linear(system: &SynthesisSystem) -> LinearSolution {
    solve_linear_polys(system.polys(), system.num_vars())
}

pub(crate) fn solve_linear_polys(polys: &[Polynomial], n: usize) -> LinearSolution {
    if polys.iter().any(|p| p.total_degree().is_some_and(|d| d > 1)) {
        return LinearSolution::NotLinear;
    }
    // Augmented rows [a_1 .. a_n | -c] for a·y + c = 0.
    let mut rows: Vec<Vec<Rational>> = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let mut row = vec![Rational::zero(); n + 1];
            for (m, c) in p.terms() {
                match m.exponents().position(|e| e == 1) {
                    Some(i) => row[i] = c.clone(),
                    None => row[n] = -c.clone(),
                }
            }
            row
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return LinearSolution::Empty;
    }

    let mut particular = vec![Rational::zero(); n];
    for (k, &col) in pivots.iter().enumerate() {
        particular[col] = rows[k][n].clone();
    }
    let kernel = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (k, &col) in pivots.iter().enumerate() {
                v[col] = -rows[k][free].clone();
            }
            v
        })
        .collect();
    LinearSolution::Parametric { particular, kernel }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_polynomial, rat, VarContext};

    fn solve(names: &[&str], polys: &[&str]) -> LinearSolution {
        let ctx = VarContext::new(names).unwrap();
        let ps: Vec<_> = polys.iter().map(|s| parse_polynomial(s, &ctx).unwrap()).collect();
        solve_linear_polys(&ps, names.len())
    }

    #[test]
    fn unique_solution() {
        let s = solve(&["a", "b"], &["a + b - 3", "a - b - 1"]);
        assert_eq!(
            s,
            LinearSolution::Parametric {
                particular: vec![rat(2), rat(1)],
                kernel: vec![]
            }
        );
    }

    #[test]
    fn kernel_spans_homogeneous_solutions() {
        let ctx = VarContext::new(&["a", "b", "c"]).unwrap();
        let ps = vec![parse_polynomial("a + 2*b - c", &ctx).unwrap()];
        let LinearSolution::Parametric { particular, kernel } = solve_linear_polys(&ps, 3) else {
            panic!()
        };
        assert_eq!(kernel.len(), 2);
        for v in std::iter::once(&particular).chain(&kernel) {
            assert!(ps[0].evaluate(v).unwrap().is_zero());
        }
    }

    #[test]
    fn inconsistent_and_nonlinear() {
        assert_eq!(solve(&["a"], &["a - 1", "a - 2"]), LinearSolution::Empty);
        assert_eq!(solve(&["a", "b"], &["a*b"]), LinearSolution::NotLinear);
        assert!(!solve(&["a"], &["3*a"]).has_nonzero_point());
    }
}
