use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polyring::{Polynomial, Rational, VarBlock, VarContext};

fn check_program_ctx(ctx: &Arc<VarContext>, p: &Polynomial, what: &str) -> Result<()> {
    if p.context() != ctx {
        return Err(Error::InvalidTemplate(format!(
            "{what} `{p}` is not over the program variables"
        )));
    }
    Ok(())
}

/// Target invariants: polynomials in the program variables.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantSpec {
    polys: Vec<Polynomial>,
}

impl InvariantSpec {
    pub fn new(polys: Vec<Polynomial>) -> Result<Self> {
        let first = polys
            .first()
            .ok_or_else(|| Error::InvalidTemplate("no invariants given".into()))?;
        let ctx = first.context().clone();
        for p in &polys {
            check_program_ctx(&ctx, p, "invariant")?;
        }
        Ok(InvariantSpec { polys })
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn context(&self) -> &Arc<VarContext> {
        self.polys[0].context()
    }

    pub fn max_degree(&self) -> u32 {
        self.polys.iter().filter_map(Polynomial::total_degree).max().unwrap_or(0)
    }

    /// Whether every invariant vanishes at `point`.
    pub fn holds_at(&self, point: &[Rational]) -> Result<bool> {
        for g in &self.polys {
            if !g.evaluate(point)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The synthesis problem: each update component `F_i` ranges over the span of
/// its generator list `f_i = (f_{i,1}, …, f_{i,l_i})`.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopTemplate {
    ctx: Arc<VarContext>,
    initial: Vec<Rational>,
    guard: Polynomial,
    generators: Vec<Vec<Polynomial>>,
}

impl LoopTemplate {
    pub fn new(
        ctx: &Arc<VarContext>,
        initial: Vec<Rational>,
        guard: Polynomial,
        generators: Vec<Vec<Polynomial>>,
    ) -> Result<Self> {
        let n = ctx.len();
        if initial.len() != n {
            return Err(Error::Arity {
                expected: n,
                found: initial.len(),
            });
        }
        if generators.len() != n {
            return Err(Error::Arity {
                expected: n,
                found: generators.len(),
            });
        }
        check_program_ctx(ctx, &guard, "guard")?;
        for (i, list) in generators.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::InvalidTemplate(format!(
                    "variable `{}` has no generators",
                    ctx.name(i)
                )));
            }
            for f in list {
                check_program_ctx(ctx, f, "generator")?;
            }
        }
        Ok(LoopTemplate {
            ctx: ctx.clone(),
            initial,
            guard,
            generators,
        })
    }

    /// Like [`LoopTemplate::new`], with several guard inequations
    /// `h_1 ≠ 0, …, h_k ≠ 0` replaced by their product. No guards means an
    /// infinite loop.
    pub fn with_guards(
        ctx: &Arc<VarContext>,
        initial: Vec<Rational>,
        guards: &[Polynomial],
        generators: Vec<Vec<Polynomial>>,
    ) -> Result<Self> {
        let mut h = Polynomial::one(ctx);
        for g in guards {
            check_program_ctx(ctx, g, "guard")?;
            h = &h * g;
        }
        Self::new(ctx, initial, h, generators)
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.ctx.len()
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    pub fn guard(&self) -> &Polynomial {
        &self.guard
    }

    pub fn generators(&self) -> &[Vec<Polynomial>] {
        &self.generators
    }

    /// `l = l_1 + … + l_n`, the number of template coefficients.
    pub fn num_coefficients(&self) -> usize {
        self.generators.iter().map(Vec::len).sum()
    }

    /// Largest total degree among the generators.
    pub fn max_generator_degree(&self) -> u32 {
        self.generators
            .iter()
            .flatten()
            .filter_map(Polynomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// The concrete loop with update `F_i = Σ_j b_{i,j} f_{i,j}`, where `b`
    /// lists the coefficients row by row.
    pub fn instantiate(&self, b: &[Rational]) -> Result<ConcreteLoop> {
        if b.len() != self.num_coefficients() {
            return Err(Error::Arity {
                expected: self.num_coefficients(),
                found: b.len(),
            });
        }
        let mut coeffs = b.iter();
        let update = self
            .generators
            .iter()
            .map(|list| {
                list.iter().fold(Polynomial::zero(&self.ctx), |acc, f| {
                    &acc + &f.scale(coeffs.next().unwrap())
                })
            })
            .collect();
        ConcreteLoop::new(self.initial.clone(), self.guard.clone(), update)
    }
}

/// A fully instantiated loop `L(a, h, F)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcreteLoop {
    initial: Vec<Rational>,
    guard: Polynomial,
    update: Vec<Polynomial>,
}

impl ConcreteLoop {
    pub fn new(initial: Vec<Rational>, guard: Polynomial, update: Vec<Polynomial>) -> Result<Self> {
        let ctx = guard.context().clone();
        let n = ctx.len();
        if update.len() != n || initial.len() != n {
            return Err(Error::Arity {
                expected: n,
                found: if update.len() != n { update.len() } else { initial.len() },
            });
        }
        for f in &update {
            check_program_ctx(&ctx, f, "update component")?;
        }
        Ok(ConcreteLoop {
            initial,
            guard,
            update,
        })
    }

    pub fn context(&self) -> &Arc<VarContext> {
        self.guard.context()
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    pub fn guard(&self) -> &Polynomial {
        &self.guard
    }

    pub fn update(&self) -> &[Polynomial] {
        &self.update
    }

    /// One application of the update map.
    pub fn step(&self, state: &[Rational]) -> Result<Vec<Rational>> {
        self.update.iter().map(|f| f.evaluate(state)).collect()
    }
}

/// The map `G_{y,h}(x, y, z) = (Σ_j y_{1,j} f_{1,j}, …, Σ_j y_{n,j} f_{n,j}, y, z·h)`
/// over the context `(x, y, z)`.
#[derive(Clone, Debug)]
pub struct AugmentedMap {
    pub context: Arc<VarContext>,
    pub components: Vec<Polynomial>,
}

impl AugmentedMap {
    pub fn program_vars(&self) -> Vec<usize> {
        self.context.block_indices(VarBlock::Program)
    }

    pub fn coefficient_vars(&self) -> Vec<usize> {
        self.context.block_indices(VarBlock::Coefficient)
    }

    pub fn guard_var(&self) -> usize {
        self.context.block_indices(VarBlock::Guard)[0]
    }
}

pub fn build_augmented_map(t: &LoopTemplate) -> Result<AugmentedMap> {
    let x = t.context();
    let l = t.num_coefficients();
    let mut vars: Vec<(String, VarBlock)> = x
        .names()
        .iter()
        .map(|n| (n.clone(), VarBlock::Program))
        .collect();
    let y_names: Vec<String> = (1..=l).map(|k| x.fresh_name(&format!("y{k}"))).collect();
    vars.extend(y_names.iter().map(|n| (n.clone(), VarBlock::Coefficient)));
    vars.push((x.fresh_name("z"), VarBlock::Guard));
    let ctx = VarContext::from_blocks(vars)?;

    let n = t.n();
    let mut components = Vec::with_capacity(n + l + 1);
    let mut k = n;
    for list in t.generators() {
        let mut sum = Polynomial::zero(&ctx);
        for f in list {
            let y = Polynomial::var_at(&ctx, k);
            sum = &sum + &(&y * &f.extend_context(&ctx)?);
            k += 1;
        }
        components.push(sum);
    }
    components.extend((n..n + l).map(|i| Polynomial::var_at(&ctx, i)));
    let z = Polynomial::var_at(&ctx, n + l);
    components.push(&z * &t.guard().extend_context(&ctx)?);
    Ok(AugmentedMap {
        context: ctx,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_polynomial, rat};

    pub(crate) fn example_template() -> LoopTemplate {
        let x = VarContext::new(&["x1", "x2", "x3"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &x).unwrap();
        LoopTemplate::new(
            &x,
            vec![rat(1), rat(1), rat(-1)],
            Polynomial::one(&x),
            vec![vec![p("x1^3"), p("x2^2")], vec![p("x1"), p("x2^2")], vec![p("x1")]],
        )
        .unwrap()
    }

    #[test]
    fn augmented_map_matches_hand_expansion() {
        let t = example_template();
        let g = build_augmented_map(&t).unwrap();
        let rendered: Vec<String> = g.components.iter().map(|p| p.to_string()).collect();
        assert_eq!(
            rendered,
            [
                "x1^3*y1 + x2^2*y2",
                "x2^2*y4 + x1*y3",
                "x1*y5",
                "y1",
                "y2",
                "y3",
                "y4",
                "y5",
                "z"
            ]
        );
        assert_eq!(g.context.len(), 9);
    }

    #[test]
    fn smallest_template() {
        let x = VarContext::new(&["x1"]).unwrap();
        let x1 = Polynomial::var(&x, "x1").unwrap();
        let t = LoopTemplate::new(&x, vec![rat(0)], x1.clone(), vec![vec![x1]]).unwrap();
        let g = build_augmented_map(&t).unwrap();
        let rendered: Vec<String> = g.components.iter().map(|p| p.to_string()).collect();
        assert_eq!(rendered, ["x1*y1", "y1", "x1*z"]);
    }

    #[test]
    fn fresh_names_avoid_program_variables() {
        let x = VarContext::new(&["y1", "z"]).unwrap();
        let one = Polynomial::one(&x);
        let t = LoopTemplate::new(&x, vec![rat(0), rat(0)], one.clone(), vec![vec![one.clone()], vec![one]]).unwrap();
        let g = build_augmented_map(&t).unwrap();
        assert_eq!(g.context.names(), ["y1", "z", "_y1", "y2", "_z"]);
    }

    #[test]
    fn guards_are_multiplied() {
        let x = VarContext::new(&["x1", "x2"]).unwrap();
        let p = |s: &str| parse_polynomial(s, &x).unwrap();
        let t = LoopTemplate::with_guards(
            &x,
            vec![rat(0), rat(0)],
            &[p("x1 - 1"), p("x2")],
            vec![vec![p("x1")], vec![p("x2")]],
        )
        .unwrap();
        assert_eq!(t.guard(), &p("x1*x2 - x2"));
    }

    #[test]
    fn validation_errors() {
        let x = VarContext::new(&["x1"]).unwrap();
        let one = Polynomial::one(&x);
        assert!(LoopTemplate::new(&x, vec![], one.clone(), vec![vec![one.clone()]]).is_err());
        assert!(LoopTemplate::new(&x, vec![rat(0)], one.clone(), vec![vec![]]).is_err());
        let other = VarContext::new(&["w"]).unwrap();
        let w = Polynomial::var(&other, "w").unwrap();
        assert!(LoopTemplate::new(&x, vec![rat(0)], one, vec![vec![w]]).is_err());
        assert!(InvariantSpec::new(vec![]).is_err());
    }

    #[test]
    fn instantiation() {
        let t = example_template();
        let b: Vec<Rational> = [-3, 3, 1, -1, 0].iter().map(|&v| rat(v)).collect();
        let l = t.instantiate(&b).unwrap();
        let rendered: Vec<String> = l.update().iter().map(|p| p.to_string()).collect();
        assert_eq!(rendered, ["-3*x1^3 + 3*x2^2", "-x2^2 + x1", "0"]);
        assert!(t.instantiate(&b[..4]).is_err());
    }
}
