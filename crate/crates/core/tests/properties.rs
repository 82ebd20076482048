use std::sync::Arc;

use num_traits::{Signed, Zero};
use polyloop_core::groebner::{buchberger, divide, in_radical, s_polynomial};
use polyloop_core::polyring::{Monomial, MonomialOrder, Polynomial, Rational, VarBlock, VarContext};
use polyloop_core::solve::{brute_force_box, rational_roots, solve_linear, LinearSolution};
use polyloop_core::SynthesisSystem;
use proptest::prelude::*;

fn ctx3() -> Arc<VarContext> {
    VarContext::new(&["x", "y", "z"]).unwrap()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn poly(max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::array::uniform3(0..=max_exp), rational()), 0..=max_terms).prop_map(|terms| {
        let ctx = ctx3();
        Polynomial::from_terms(&ctx, terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), c)))
    })
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(p in poly(3, 6), q in poly(3, 6), r in poly(3, 6)) {
        let zero = Polynomial::zero(&ctx3());
        let one = Polynomial::one(&ctx3());
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p + &zero, p.clone());
        prop_assert_eq!(&p * &one, p.clone());
        prop_assert!((&p * &zero).is_zero());
        let cancelled = &p + &(-&p);
        prop_assert!(cancelled.is_zero());
        prop_assert_eq!(cancelled.num_terms(), 0);
        prop_assert!(p.terms().iter().all(|(_, c)| !c.is_zero()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(3, 5), q in poly(3, 5), pt in point()) {
        let (a, b) = (p.evaluate(&pt).unwrap(), q.evaluate(&pt).unwrap());
        prop_assert_eq!((&p * &q).evaluate(&pt).unwrap(), &a * &b);
        prop_assert_eq!((&p + &q).evaluate(&pt).unwrap(), &a + &b);
        prop_assert_eq!((&p - &q).evaluate(&pt).unwrap(), &a - &b);
    }

    #[test]
    fn composition_commutes_with_evaluation(
        g in poly(3, 5),
        f1 in poly(2, 3),
        f2 in poly(2, 3),
        f3 in poly(2, 3),
        pt in point(),
    ) {
        let maps = [f1, f2, f3];
        let inner: Vec<Rational> = maps.iter().map(|f| f.evaluate(&pt).unwrap()).collect();
        let composed = g.compose(&maps).unwrap();
        prop_assert_eq!(composed.evaluate(&pt).unwrap(), g.evaluate(&inner).unwrap());
    }
}

/// Every fraction p/q with |p| <= |a0| and 1 <= q <= |an|, evaluated
/// directly (no divisibility filtering).
fn roots_by_enumeration(coeffs: &[i64]) -> Vec<Rational> {
    let mut roots = Vec::new();
    if coeffs[0] == 0 {
        roots.push(Rational::zero());
    }
    let low = coeffs.iter().position(|&c| c != 0).unwrap();
    let a0 = coeffs[low].abs();
    let an = coeffs.last().unwrap().abs();
    // q^n * f(p/q) = sum c_i p^i q^(n-i), exact in i128 at these sizes.
    let n = coeffs.len() - 1;
    let vanishes = |p: i128, q: i128| {
        let mut total: i128 = 0;
        for (i, &c) in coeffs.iter().enumerate() {
            total += c as i128 * p.pow(i as u32) * q.pow((n - i) as u32);
        }
        total == 0
    };
    for p in -a0..=a0 {
        for q in 1..=an {
            if p != 0 && vanishes(p as i128, q as i128) {
                roots.push(Rational::new(p.into(), q.into()));
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn univariate(coeffs: &[i64]) -> Polynomial {
    let ctx = VarContext::new(&["y"]).unwrap();
    Polynomial::from_terms(
        &ctx,
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (Monomial::from_exponents(&[i as u32]), Rational::from_integer(c.into()))),
    )
}

fn expand(factors: &[(i64, i64)], extra: &[i64]) -> Vec<i64> {
    let mut out = extra.to_vec();
    for &(a, b) in factors {
        // multiply by (a*y + b)
        let mut next = vec![0; out.len() + 1];
        for (i, &c) in out.iter().enumerate() {
            next[i] += c * b;
            next[i + 1] += c * a;
        }
        out = next;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rational_roots_match_enumeration(coeffs in prop::collection::vec(-50i64..=50, 1..=7)) {
        prop_assume!(coeffs.iter().any(|&c| c != 0));
        let mut coeffs = coeffs;
        while *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        let found = rational_roots(&univariate(&coeffs)).unwrap();
        prop_assert_eq!(&found, &roots_by_enumeration(&coeffs));
        let p = univariate(&coeffs);
        for r in &found {
            prop_assert!(p.evaluate(std::slice::from_ref(r)).unwrap().is_zero());
        }
    }

    #[test]
    fn planted_roots_are_found(
        factors in prop::collection::vec((1i64..=4, -4i64..=4), 1..=3),
        extra in prop::collection::vec(-5i64..=5, 1..=3),
    ) {
        prop_assume!(extra.iter().any(|&c| c != 0));
        let coeffs = expand(&factors, &extra);
        let mut coeffs = coeffs;
        while *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        let found = rational_roots(&univariate(&coeffs)).unwrap();
        for &(a, b) in &factors {
            prop_assert!(found.contains(&Rational::new((-b).into(), a.into())));
        }
        prop_assert_eq!(&found, &roots_by_enumeration(&coeffs));
    }
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::array::uniform3(0u32..=2), -3i64..=3), 1..=3).prop_map(|terms| {
        let ctx = ctx3();
        Polynomial::from_terms(
            &ctx,
            terms
                .into_iter()
                .map(|(e, c)| (Monomial::from_exponents(&e), Rational::from_integer(c.into()))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn computed_bases_satisfy_buchberger(gens in prop::collection::vec(small_poly(), 1..=3), lex in any::<bool>()) {
        prop_assume!(gens.iter().any(|g| !g.is_zero()));
        let order = if lex { MonomialOrder::Lex } else { MonomialOrder::DegRevLex };
        let b = buchberger(&gens, order).unwrap();
        let basis = b.generators();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let s = s_polynomial(&basis[i], &basis[j], order);
                let (_, r) = divide(&s, basis, order);
                prop_assert!(r.is_zero(), "S({}, {}) leaves {}", basis[i], basis[j], r);
            }
        }
        for g in &gens {
            prop_assert!(b.contains(g));
        }
        // Reduced: no leading monomial divides a term of another generator.
        let leads = b.leading_monomials();
        for (i, g) in basis.iter().enumerate() {
            for (j, l) in leads.iter().enumerate() {
                if i != j {
                    prop_assert!(g.terms().iter().all(|(m, _)| !l.divides(m)));
                }
            }
        }
    }

    #[test]
    fn division_witnesses_reconstruct(f in poly(3, 5), divs in prop::collection::vec(small_poly(), 1..=3), pt in point()) {
        let (qs, r) = divide(&f, &divs, MonomialOrder::DegRevLex);
        let mut sum = r.evaluate(&pt).unwrap();
        for (q, d) in qs.iter().zip(&divs) {
            sum += q.evaluate(&pt).unwrap() * d.evaluate(&pt).unwrap();
        }
        prop_assert_eq!(sum, f.evaluate(&pt).unwrap());
    }

    #[test]
    fn radical_membership_is_sound_on_sampled_zeros(s in prop::collection::vec(small_poly(), 1..=2), f in small_poly()) {
        prop_assume!(s.iter().all(|g| !g.is_zero()));
        if in_radical(&f, &s).unwrap() {
            for a in -2i64..=2 {
                for b in -2i64..=2 {
                    for c in -2i64..=2 {
                        let pt: Vec<Rational> = [a, b, c].iter().map(|&v| Rational::from_integer(v.into())).collect();
                        if s.iter().all(|g| g.evaluate(&pt).unwrap().is_zero()) {
                            prop_assert!(f.evaluate(&pt).unwrap().is_zero());
                        }
                    }
                }
            }
        }
        // f^k in <S> implies f in the radical.
        let s_with_power: Vec<Polynomial> = vec![f.pow(2)];
        if !f.is_zero() {
            prop_assert!(in_radical(&f, &s_with_power).unwrap());
        }
    }
}

fn coefficient_context(l: usize) -> Arc<VarContext> {
    VarContext::from_blocks((1..=l).map(|i| (format!("y{i}"), VarBlock::Coefficient))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn linear_solution_matches_box_search(rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 4), 0..=3)) {
        let ctx = coefficient_context(3);
        let polys: Vec<Polynomial> = rows
            .iter()
            .map(|r| {
                let mut terms: Vec<(Monomial, Rational)> = (0..3)
                    .map(|i| (Monomial::var(3, i, 1), Rational::from_integer(r[i].into())))
                    .collect();
                terms.push((Monomial::one(3), Rational::from_integer(r[3].into())));
                Polynomial::from_terms(&ctx, terms)
            })
            .collect();
        let system = SynthesisSystem::from_polys(&ctx, polys);
        let bound = 2;
        let boxed = brute_force_box(&system, bound, 1_000_000).unwrap();
        let in_family: Vec<Vec<Rational>> = match solve_linear(&system) {
            LinearSolution::Empty => Vec::new(),
            LinearSolution::NotLinear => unreachable!(),
            LinearSolution::Parametric { particular, kernel } => {
                // Enumerate the box and keep points of particular + span(kernel):
                // a point v is in the family iff v - particular is in the span,
                // tested by exact membership in the row space.
                let mut pts = Vec::new();
                for a in -2i64..=2 {
                    for b in -2i64..=2 {
                        for c in -2i64..=2 {
                            let v: Vec<Rational> = [a, b, c].iter().map(|&x| Rational::from_integer(x.into())).collect();
                            let d: Vec<Rational> = v.iter().zip(&particular).map(|(x, p)| x - p).collect();
                            if in_span(&d, &kernel) {
                                pts.push(v);
                            }
                        }
                    }
                }
                pts
            }
        };
        let mut boxed = boxed;
        let mut in_family = in_family;
        boxed.sort();
        in_family.sort();
        prop_assert_eq!(boxed, in_family);
    }
}

/// Whether `v` lies in the span of `basis` (exact Gaussian elimination).
fn in_span(v: &[Rational], basis: &[Vec<Rational>]) -> bool {
    let mut rows: Vec<Vec<Rational>> = basis.to_vec();
    let rank = |rows: &mut Vec<Vec<Rational>>| {
        let n = v.len();
        let mut r = 0;
        for col in 0..n {
            if let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) {
                rows.swap(r, p);
                let pivot = rows[r].clone();
                for (i, row) in rows.iter_mut().enumerate() {
                    if i != r && !row[col].is_zero() {
                        let f = &row[col] / &pivot[col];
                        for (x, px) in row.iter_mut().zip(&pivot) {
                            *x -= &f * px;
                        }
                    }
                }
                r += 1;
            }
        }
        r
    };
    let before = rank(&mut rows.clone());
    rows.push(v.to_vec());
    before == rank(&mut rows)
}

#[test]
fn normalized_output_has_coprime_integers_and_positive_lead() {
    let ctx = ctx3();
    let p = polyloop_core::polyring::parse_polynomial("-3/4*x^2 + 1/2*y - 6", &ctx).unwrap();
    let n = p.normalized();
    assert_eq!(n.to_string(), "3*x^2 - 2*y + 24");
    assert!(n.terms()[0].1.is_positive());
}
