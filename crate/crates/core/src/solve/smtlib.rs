//! SMT-LIB2 scripts for polynomial systems, and a small s-expression reader
//! for scripts and solver models.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{NonzeroPolicy, SolveDomain, SolveRequest};
use crate::error::{Error, Result};
use crate::polyring::{Polynomial, Rational, VarBlock, VarContext};

/// Renders `name` as an SMT-LIB symbol, quoting it when needed.
pub fn symbol(name: &str) -> String {
    let simple = !name.is_empty()
        && !name.starts_with(|c: char| c.is_ascii_digit())
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c));
    if simple {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

fn literal(c: &BigInt, domain: SolveDomain) -> String {
    let suffix = if domain == SolveDomain::Rationals { ".0" } else { "" };
    if c.is_negative() {
        format!("(- {}{suffix})", c.abs())
    } else {
        format!("{c}{suffix}")
    }
}

/// Prefix form of `p` with coefficients cleared to coprime integers.
pub fn prefix_form(p: &Polynomial, domain: SolveDomain) -> String {
    if p.is_zero() {
        return literal(&BigInt::zero(), domain);
    }
    let ctx = p.context();
    let coeffs = p.integer_coefficients();
    let terms: Vec<String> = p
        .terms()
        .iter()
        .zip(&coeffs)
        .map(|((m, _), c)| {
            let mut factors: Vec<String> = Vec::new();
            for (i, e) in m.exponents().enumerate() {
                for _ in 0..e {
                    factors.push(symbol(ctx.name(i)));
                }
            }
            if factors.is_empty() {
                return literal(c, domain);
            }
            if c.is_one() && factors.len() == 1 {
                return factors.pop().unwrap();
            }
            if (-c).is_one() {
                let inner = if factors.len() == 1 {
                    factors.pop().unwrap()
                } else {
                    format!("(* {})", factors.join(" "))
                };
                return format!("(- {inner})");
            }
            if !c.is_one() {
                factors.insert(0, literal(c, domain));
            }
            format!("(* {})", factors.join(" "))
        })
        .collect();
    if terms.len() == 1 {
        terms.into_iter().next().unwrap()
    } else {
        format!("(+ {})", terms.join(" "))
    }
}

/// SMT-LIB2 script asserting `P_i = 0` for every polynomial of the system
/// plus the nonzero policy, ending with `(check-sat)` and `(get-model)`.
pub fn emit_smtlib(req: &SolveRequest<'_>) -> Result<String> {
    let system = req.system;
    if system.is_empty() {
        return Err(Error::EmptySystem);
    }
    let ctx = system.context();
    let (logic, sort) = match req.domain {
        SolveDomain::Integers => ("QF_NIA", "Int"),
        SolveDomain::Rationals => ("QF_NRA", "Real"),
    };
    let zero = literal(&BigInt::zero(), req.domain);
    let mut out = String::new();
    out.push_str("(set-option :produce-models true)\n");
    let _ = writeln!(out, "(set-logic {logic})");
    for name in ctx.names() {
        let _ = writeln!(out, "(declare-const {} {sort})", symbol(name));
    }
    for p in system.polys() {
        let _ = writeln!(out, "(assert (= {} {zero}))", prefix_form(p, req.domain));
    }
    let distinct = |i: usize| format!("(distinct {} {zero})", symbol(ctx.name(i)));
    match req.policy {
        NonzeroPolicy::VectorNonzero if ctx.len() == 1 => {
            let _ = writeln!(out, "(assert {})", distinct(0));
        }
        NonzeroPolicy::VectorNonzero if ctx.len() > 1 => {
            let parts: Vec<String> = (0..ctx.len()).map(distinct).collect();
            let _ = writeln!(out, "(assert (or {}))", parts.join(" "));
        }
        NonzeroPolicy::AllNonzero => {
            for i in 0..ctx.len() {
                let _ = writeln!(out, "(assert {})", distinct(i));
            }
        }
        NonzeroPolicy::Coordinate(k) => {
            if k >= ctx.len() {
                return Err(Error::Arity {
                    expected: ctx.len(),
                    found: k + 1,
                });
            }
            let _ = writeln!(out, "(assert {})", distinct(k));
        }
        _ => {}
    }
    out.push_str("(check-sat)\n(get-model)\n");
    Ok(out)
}

/// An s-expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExpr {
    Atom(String),
    List(Vec<SExpr>),
}

impl SExpr {
    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(a) => Some(a),
            SExpr::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List(l) => Some(l),
            SExpr::Atom(_) => None,
        }
    }

    fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }
}

/// Reads every top-level s-expression in `text`. `;` starts a comment;
/// `|…|` symbols and `"…"` strings are single atoms (bars are stripped).
pub fn parse_sexprs(text: &str) -> Result<Vec<SExpr>> {
    let mut stack: Vec<Vec<SExpr>> = vec![Vec::new()];
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let (mut line, mut col) = (1, 1);
    let bad = |line, col, msg: &str| Error::parse(line, col, msg.to_string());
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |i: &mut usize, n: usize, chars: &[char]| {
            for k in 0..n {
                if chars[*i + k] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            *i += n;
        };
        match c {
            ';' => {
                let end = chars[i..].iter().position(|&c| c == '\n').map_or(chars.len() - i, |p| p);
                advance(&mut i, end, &chars);
            }
            '(' => {
                stack.push(Vec::new());
                advance(&mut i, 1, &chars);
            }
            ')' => {
                let done = stack.pop().unwrap();
                let parent = stack.last_mut().ok_or_else(|| bad(l0, c0, "unbalanced `)`"))?;
                parent.push(SExpr::List(done));
                advance(&mut i, 1, &chars);
            }
            c if c.is_whitespace() => advance(&mut i, 1, &chars),
            '|' | '"' => {
                let close = chars[i + 1..]
                    .iter()
                    .position(|&d| d == c)
                    .ok_or_else(|| bad(l0, c0, "unterminated quoted atom"))?;
                let body: String = chars[i + 1..i + 1 + close].iter().collect();
                let atom = if c == '"' { format!("\"{body}\"") } else { body };
                stack.last_mut().unwrap().push(SExpr::Atom(atom));
                advance(&mut i, close + 2, &chars);
            }
            _ => {
                let len = chars[i..]
                    .iter()
                    .position(|&d| d.is_whitespace() || d == '(' || d == ')' || d == ';')
                    .unwrap_or(chars.len() - i);
                let atom: String = chars[i..i + len].iter().collect();
                stack.last_mut().unwrap().push(SExpr::Atom(atom));
                advance(&mut i, len, &chars);
            }
        }
    }
    if stack.len() != 1 {
        return Err(bad(line, col, "unbalanced `(`"));
    }
    Ok(stack.pop().unwrap())
}

fn numeral(atom: &str) -> Option<Rational> {
    if atom.starts_with(|c: char| c.is_ascii_digit()) {
        crate::polyring::parse_rational(atom)
    } else {
        None
    }
}

/// Evaluates a constant arithmetic term such as `3`, `(- 3)`, `2.5` or
/// `(/ (- 1) 2)`.
pub fn constant_value(e: &SExpr) -> Result<Rational> {
    let malformed = || Error::MalformedModel(format!("unsupported value {e:?}"));
    match e {
        SExpr::Atom(a) => numeral(a).ok_or_else(malformed),
        SExpr::List(items) => {
            let op = items.first().and_then(SExpr::as_atom).ok_or_else(malformed)?;
            let args = items[1..].iter().map(constant_value).collect::<Result<Vec<_>>>()?;
            match (op, args.as_slice()) {
                ("-", [v]) => Ok(-v.clone()),
                ("-", [a, rest @ ..]) => Ok(rest.iter().fold(a.clone(), |acc, v| acc - v)),
                ("+", _) => Ok(args.iter().sum()),
                ("*", _) => Ok(args.iter().product()),
                ("/", [a, b]) if !b.is_zero() => Ok(a / b),
                _ => Err(malformed()),
            }
        }
    }
}

/// Converts an arithmetic term over declared constants into a polynomial.
pub fn term_to_polynomial(e: &SExpr, ctx: &Arc<VarContext>) -> Result<Polynomial> {
    let bad = |msg: String| Error::parse(1, 1, msg);
    match e {
        SExpr::Atom(a) => {
            if let Some(v) = numeral(a) {
                return Ok(Polynomial::constant(ctx, v));
            }
            Polynomial::var(ctx, a)
        }
        SExpr::List(items) => {
            let op = items
                .first()
                .and_then(SExpr::as_atom)
                .ok_or_else(|| bad(format!("bad term {e:?}")))?;
            let args = items[1..]
                .iter()
                .map(|a| term_to_polynomial(a, ctx))
                .collect::<Result<Vec<_>>>()?;
            match (op, args.as_slice()) {
                ("-", [v]) => Ok(-v),
                ("-", [a, rest @ ..]) => Ok(rest.iter().fold(a.clone(), |acc, v| &acc - v)),
                ("+", [_, ..]) => Ok(args.iter().skip(1).fold(args[0].clone(), |acc, v| &acc + v)),
                ("*", [_, ..]) => Ok(args.iter().skip(1).fold(args[0].clone(), |acc, v| &acc * v)),
                ("/", [a, b]) => match b.as_constant() {
                    Some(c) if !c.is_zero() => Ok(a.scale(&c.recip())),
                    _ => Err(bad("division by a non-constant".into())),
                },
                _ => Err(bad(format!("unsupported operator `{op}`"))),
            }
        }
    }
}

/// The structural content of a script produced by [`emit_smtlib`].
#[derive(Debug, Clone)]
pub struct ParsedScript {
    pub logic: String,
    pub sort: String,
    pub context: Arc<VarContext>,
    /// Left-hand sides of the `(= p 0)` assertions.
    pub equations: Vec<Polynomial>,
    /// Every other assertion, verbatim.
    pub side_conditions: Vec<SExpr>,
    pub commands: Vec<String>,
}

/// Parses a script, checking command well-formedness and that every
/// assertion mentions only declared constants.
pub fn parse_script(text: &str) -> Result<ParsedScript> {
    let bad = |msg: String| Error::parse(1, 1, msg);
    let mut logic = None;
    let mut decls: Vec<(String, String)> = Vec::new();
    let mut asserts = Vec::new();
    let mut commands = Vec::new();
    for cmd in parse_sexprs(text)? {
        let items = cmd.as_list().ok_or_else(|| bad(format!("top-level atom {cmd:?}")))?;
        let head = cmd.head().ok_or_else(|| bad("empty command".into()))?.to_string();
        match (head.as_str(), &items[1..]) {
            ("set-logic", [SExpr::Atom(l)]) => logic = Some(l.clone()),
            ("set-option", [SExpr::Atom(_), _]) => {}
            ("declare-const", [SExpr::Atom(n), SExpr::Atom(s)]) => decls.push((n.clone(), s.clone())),
            ("declare-fun", [SExpr::Atom(n), SExpr::List(args), SExpr::Atom(s)]) if args.is_empty() => {
                decls.push((n.clone(), s.clone()))
            }
            ("assert", [e]) => asserts.push(e.clone()),
            ("check-sat" | "get-model" | "exit", []) => {}
            _ => return Err(bad(format!("malformed or unsupported command `{head}`"))),
        }
        commands.push(head);
    }
    let logic = logic.ok_or_else(|| bad("missing set-logic".into()))?;
    let sort = decls.first().map(|d| d.1.clone()).unwrap_or_else(|| "Int".into());
    if decls.iter().any(|d| d.1 != sort) {
        return Err(bad("mixed sorts".into()));
    }
    let context = VarContext::from_blocks(decls.into_iter().map(|(n, _)| (n, VarBlock::Coefficient)))?;
    let mut equations = Vec::new();
    let mut side_conditions = Vec::new();
    for a in asserts {
        match a.as_list() {
            Some([SExpr::Atom(eq), lhs, rhs]) if eq == "=" => {
                let l = term_to_polynomial(lhs, &context)?;
                let r = term_to_polynomial(rhs, &context)?;
                equations.push(&l - &r);
            }
            _ => {
                check_symbols(&a, &context)?;
                side_conditions.push(a);
            }
        }
    }
    Ok(ParsedScript {
        logic,
        sort,
        context,
        equations,
        side_conditions,
        commands,
    })
}

fn check_symbols(e: &SExpr, ctx: &VarContext) -> Result<()> {
    const KNOWN: [&str; 8] = ["or", "and", "not", "distinct", "=", "-", "+", "*"];
    match e {
        SExpr::Atom(a) => {
            if numeral(a).is_some() || KNOWN.contains(&a.as_str()) || ctx.index_of(a).is_some() {
                Ok(())
            } else {
                Err(Error::UnknownVariable(a.clone()))
            }
        }
        SExpr::List(items) => items.iter().try_for_each(|i| check_symbols(i, ctx)),
    }
}

/// Solver response: status line plus any model values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverResponse {
    pub status: String,
    pub model: HashMap<String, Rational>,
}

/// Parses `sat`/`unsat`/`unknown` followed by an optional `get-model`
/// answer. Anything else on the status line is an error.
pub fn parse_response(stdout: &str) -> Result<SolverResponse> {
    let mut exprs = parse_sexprs(stdout)?.into_iter();
    let status = match exprs.next() {
        Some(SExpr::Atom(s)) if matches!(s.as_str(), "sat" | "unsat" | "unknown") => s,
        Some(other) => return Err(Error::MalformedModel(format!("unexpected solver output {other:?}"))),
        None => return Err(Error::MalformedModel("empty solver output".into())),
    };
    let mut model = HashMap::new();
    if status == "sat" {
        let answer = exprs
            .next()
            .ok_or_else(|| Error::MalformedModel("sat without a model".into()))?;
        let items = answer
            .as_list()
            .ok_or_else(|| Error::MalformedModel("model is not a list".into()))?;
        // Older solvers wrap the definitions as `(model …)`.
        let defs = match items.first().and_then(SExpr::as_atom) {
            Some("model") => &items[1..],
            _ => items,
        };
        for d in defs {
            match d.as_list() {
                Some([SExpr::Atom(kw), SExpr::Atom(name), SExpr::List(args), SExpr::Atom(_), value])
                    if kw == "define-fun" && args.is_empty() =>
                {
                    model.insert(name.clone(), constant_value(value)?);
                }
                _ => return Err(Error::MalformedModel(format!("unsupported model entry {d:?}"))),
            }
        }
    }
    Ok(SolverResponse { status, model })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_polynomial, rat, ratio};
    use crate::synthesis::SynthesisSystem;

    fn system(polys: &[&str]) -> SynthesisSystem {
        let ctx = VarContext::from_blocks(
            ["y1", "y2", "y3"].iter().map(|n| (n.to_string(), VarBlock::Coefficient)),
        )
        .unwrap();
        let ps = polys.iter().map(|s| parse_polynomial(s, &ctx).unwrap()).collect();
        SynthesisSystem::from_polys(&ctx, ps)
    }

    #[test]
    fn emits_prefix_polynomials() {
        let s = system(&["2*y1^2*y2 - y3 + 5", "y1"]);
        let script = emit_smtlib(&SolveRequest::new(&s)).unwrap();
        assert!(script.contains("(set-logic QF_NIA)"));
        assert!(script.contains("(declare-const y1 Int)"));
        assert!(script.contains("(assert (= (+ (* 2 y1 y1 y2) (- y3) 5) 0))"));
        assert!(script.contains("(assert (= y1 0))"));
        assert!(script.contains("(assert (or (distinct y1 0) (distinct y2 0) (distinct y3 0)))"));
        assert!(script.trim_end().ends_with("(check-sat)\n(get-model)"));
    }

    #[test]
    fn rational_domain_uses_reals() {
        let s = system(&["1/2*y1 - 3"]);
        let mut req = SolveRequest::new(&s);
        req.domain = SolveDomain::Rationals;
        req.policy = NonzeroPolicy::None;
        let script = emit_smtlib(&req).unwrap();
        assert!(script.contains("(set-logic QF_NRA)"));
        assert!(script.contains("(declare-const y1 Real)"));
        assert!(script.contains("(assert (= (+ y1 (- 6.0)) 0.0))"));
        assert!(!script.contains("distinct"));
    }

    #[test]
    fn empty_system_is_rejected() {
        let s = system(&[]);
        assert_eq!(emit_smtlib(&SolveRequest::new(&s)).unwrap_err(), Error::EmptySystem);
    }

    #[test]
    fn script_round_trip() {
        let s = system(&["2*y1^2*y2 - y3 + 5", "y1*y2*y3 - 7", "y3^3"]);
        for domain in [SolveDomain::Integers, SolveDomain::Rationals] {
            let mut req = SolveRequest::new(&s);
            req.domain = domain;
            let parsed = parse_script(&emit_smtlib(&req).unwrap()).unwrap();
            assert_eq!(parsed.context.names(), s.context().names());
            let back: Vec<_> = parsed.equations.iter().map(|p| p.normalized()).collect();
            assert_eq!(back, s.polys());
            assert_eq!(parsed.side_conditions.len(), 1);
            assert_eq!(parsed.commands.last().map(String::as_str), Some("get-model"));
        }
    }

    #[test]
    fn parser_rejects_garbage() {
        assert!(parse_sexprs("(assert (= x 0)").is_err());
        assert!(parse_sexprs("x)").is_err());
        assert!(parse_script("(declare-const y Int)(assert (= z 0))").is_err());
        assert!(parse_script("(set-logic QF_NIA)(frobnicate)").is_err());
    }

    #[test]
    fn quoted_symbols() {
        assert_eq!(symbol("y1"), "y1");
        assert_eq!(symbol("1y"), "|1y|");
        assert_eq!(symbol("a b"), "|a b|");
        assert_eq!(parse_sexprs("(|a b| c)").unwrap(), vec![SExpr::List(vec![
            SExpr::Atom("a b".into()),
            SExpr::Atom("c".into())
        ])]);
    }

    #[test]
    fn parses_models() {
        let out = "sat\n(\n  (define-fun y1 () Int\n    (- 3))\n  (define-fun y2 () Real (/ 1.0 2.0))\n)\n";
        let r = parse_response(out).unwrap();
        assert_eq!(r.status, "sat");
        assert_eq!(r.model["y1"], rat(-3));
        assert_eq!(r.model["y2"], ratio(1, 2));
        let old = "sat (model (define-fun y1 () Int 4))";
        assert_eq!(parse_response(old).unwrap().model["y1"], rat(4));
        assert_eq!(parse_response("unsat\n").unwrap().status, "unsat");
        assert!(parse_response("(error \"boom\")").is_err());
        assert!(parse_response("sat\n((define-fun y1 () Real (root-obj (+ (^ x 2) (- 2)) 1)))").is_err());
    }
}
