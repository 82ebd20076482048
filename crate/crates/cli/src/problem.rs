//! The line-oriented problem file format.
//!
//! ```text
//! # comments start with '#'
//! [variables]
//! x1, x2, x3
//! [initial]
//! x1 = 1
//! x2 = 1
//! x3 = -1
//! [guard]            # optional; several lines are multiplied together
//! x1 - 10
//! [invariants]       # `p` or `lhs = rhs`
//! x2^2 - x1
//! x3^3 + 2*x2^2 = x1
//! [generators]       # template: one line per variable
//! x1: x1^3, x2^2
//! x2: x1, x2^2
//! x3: x1
//! [settings]         # optional
//! domain = integers
//! policy = vector-nonzero
//! ```
//!
//! A concrete loop for `check` uses `[update]` with `x1: <polynomial>` lines
//! instead of `[generators]`.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Duration;

use polyloop_core::polyring::{parse_polynomial, parse_rational};
use polyloop_core::{
    ConcreteLoop, InvariantSpec, LoopTemplate, NonzeroPolicy, Polynomial, Rational, SolveDomain, VarContext,
};

use crate::error::{CliError, CliResult};

/// Loop body: either a template to synthesize or a fixed update map.
#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Template(Vec<Vec<Polynomial>>),
    Update(Vec<Polynomial>),
}

/// Optional per-problem overrides of the command-line defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub domain: Option<SolveDomain>,
    pub policy: Option<NonzeroPolicy>,
    pub synth_budget: Option<Duration>,
    pub solver_budget: Option<Duration>,
    pub max_rounds: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub name: String,
    pub variables: Arc<VarContext>,
    pub initial: Vec<Rational>,
    pub guards: Vec<Polynomial>,
    pub invariants: Vec<Polynomial>,
    pub body: Body,
    pub settings: Settings,
}

pub fn parse_domain(s: &str) -> Option<SolveDomain> {
    match s.trim() {
        "integers" | "int" | "ZZ" => Some(SolveDomain::Integers),
        "rationals" | "rat" | "QQ" => Some(SolveDomain::Rationals),
        _ => None,
    }
}

pub fn domain_name(d: SolveDomain) -> &'static str {
    match d {
        SolveDomain::Integers => "integers",
        SolveDomain::Rationals => "rationals",
    }
}

/// `vector-nonzero`, `all-nonzero`, `none`, or `coordinate:K` with K 1-based.
pub fn parse_policy(s: &str) -> Option<NonzeroPolicy> {
    match s.trim() {
        "vector-nonzero" => Some(NonzeroPolicy::VectorNonzero),
        "all-nonzero" => Some(NonzeroPolicy::AllNonzero),
        "none" => Some(NonzeroPolicy::None),
        other => {
            let k: usize = other.strip_prefix("coordinate:")?.trim().parse().ok()?;
            (k >= 1).then(|| NonzeroPolicy::Coordinate(k - 1))
        }
    }
}

pub fn policy_name(p: NonzeroPolicy) -> String {
    match p {
        NonzeroPolicy::VectorNonzero => "vector-nonzero".into(),
        NonzeroPolicy::AllNonzero => "all-nonzero".into(),
        NonzeroPolicy::None => "none".into(),
        NonzeroPolicy::Coordinate(k) => format!("coordinate:{}", k + 1),
    }
}

fn parse_seconds(s: &str) -> Option<Duration> {
    let v: f64 = s.trim().trim_end_matches('s').parse().ok()?;
    (v.is_finite() && v > 0.0).then(|| Duration::from_secs_f64(v))
}

/// A piece of a source line with its 1-based position.
#[derive(Clone, Copy)]
struct Span<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Span<'a> {
    fn trimmed(self) -> Span<'a> {
        let lead = self.text.len() - self.text.trim_start().len();
        Span {
            text: self.text.trim(),
            line: self.line,
            column: self.column + self.text[..lead].chars().count(),
        }
    }

    fn split_at_char(self, idx: usize) -> (Span<'a>, Span<'a>) {
        let (a, b) = (&self.text[..idx], &self.text[idx + 1..]);
        let col_b = self.column + a.chars().count() + 1;
        (
            Span { text: a, ..self },
            Span {
                text: b,
                line: self.line,
                column: col_b,
            },
        )
    }

    /// Splits on commas outside parentheses.
    fn split_commas(self) -> Vec<Span<'a>> {
        let mut out = Vec::new();
        let mut depth = 0i32;
        let mut rest = self;
        let mut offset = 0;
        for (i, c) in self.text.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    let (a, b) = rest.split_at_char(i - offset);
                    out.push(a);
                    rest = b;
                    offset = i + 1;
                }
                _ => {}
            }
        }
        out.push(rest);
        out
    }
}

struct Parser<'a> {
    path: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, span: Span<'_>, message: impl Into<String>) -> CliError {
        CliError::Syntax {
            path: self.path.to_string(),
            line: span.line,
            column: span.column,
            message: message.into(),
        }
    }

    fn poly(&self, span: Span<'_>, ctx: &Arc<VarContext>) -> CliResult<Polynomial> {
        let span = span.trimmed();
        if span.text.is_empty() {
            return Err(self.err(span, "expected a polynomial"));
        }
        parse_polynomial(span.text, ctx).map_err(|e| match e {
            polyloop_core::Error::Parse { column, message, .. } => CliError::Syntax {
                path: self.path.to_string(),
                line: span.line,
                column: span.column + column - 1,
                message,
            },
            other => self.err(span, other.to_string()),
        })
    }

    fn rational(&self, span: Span<'_>) -> CliResult<Rational> {
        let span = span.trimmed();
        parse_rational(span.text).ok_or_else(|| self.err(span, format!("invalid rational `{}`", span.text)))
    }

    /// `name: rest` with the name resolved to a variable index.
    fn labelled<'s>(&self, span: Span<'s>, ctx: &VarContext) -> CliResult<(usize, Span<'s>)> {
        let idx = span
            .text
            .find(':')
            .ok_or_else(|| self.err(span, "expected `variable: ...`"))?;
        let (name, rest) = span.split_at_char(idx);
        let name = name.trimmed();
        let i = ctx
            .index_of(name.text)
            .ok_or_else(|| self.err(name, format!("undeclared variable `{}`", name.text)))?;
        Ok((i, rest))
    }
}

const SECTIONS: [&str; 7] = ["variables", "initial", "guard", "invariants", "generators", "update", "settings"];

/// Parses a problem document; `path` is used in error messages and the
/// file stem becomes the problem name unless `[settings]` sets `name`.
pub fn parse_problem(doc: &str, path: &str) -> CliResult<Problem> {
    let p = Parser { path };
    let mut sections: Vec<(&str, Span<'_>, Vec<Span<'_>>)> = Vec::new();
    for (i, raw) in doc.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        let span = Span {
            text,
            line: i + 1,
            column: 1,
        }
        .trimmed();
        if span.text.is_empty() {
            continue;
        }
        if let Some(inner) = span.text.strip_prefix('[') {
            let name = inner
                .strip_suffix(']')
                .ok_or_else(|| p.err(span, "unterminated section header"))?
                .trim();
            let name = SECTIONS
                .iter()
                .find(|s| **s == name)
                .ok_or_else(|| p.err(span, format!("unknown section `{name}`")))?;
            if sections.iter().any(|(n, ..)| n == name) {
                return Err(p.err(span, format!("duplicate section `{name}`")));
            }
            sections.push((name, span, Vec::new()));
        } else {
            match sections.last_mut() {
                Some((_, _, lines)) => lines.push(span),
                None => return Err(p.err(span, "content before the first section header")),
            }
        }
    }
    let section = |name: &str| sections.iter().find(|(n, ..)| *n == name);
    let end = Span {
        text: "",
        line: doc.lines().count().max(1),
        column: 1,
    };

    let (_, _, var_lines) = section("variables").ok_or_else(|| p.err(end, "missing [variables] section"))?;
    let mut names = Vec::new();
    for line in var_lines {
        for part in line.split_commas() {
            for word in part.text.split_whitespace() {
                if !word.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                    || !word.chars().all(|c| c.is_alphanumeric() || c == '_')
                {
                    return Err(p.err(part.trimmed(), format!("invalid variable name `{word}`")));
                }
                names.push(word.to_string());
            }
        }
    }
    if names.is_empty() {
        return Err(p.err(end, "no variables declared"));
    }
    let ctx = VarContext::new(&names).map_err(|e| p.err(var_lines[0], e.to_string()))?;
    let n = ctx.len();

    let (_, init_head, init_lines) = section("initial").ok_or_else(|| p.err(end, "missing [initial] section"))?;
    let mut initial: Vec<Option<Rational>> = vec![None; n];
    let mut positional = Vec::new();
    for line in init_lines {
        if let Some(eq) = line.text.find('=') {
            let (name, value) = line.split_at_char(eq);
            let name = name.trimmed();
            let i = ctx
                .index_of(name.text)
                .ok_or_else(|| p.err(name, format!("undeclared variable `{}`", name.text)))?;
            if initial[i].is_some() {
                return Err(p.err(name, format!("initial value of `{}` given twice", name.text)));
            }
            initial[i] = Some(p.rational(value)?);
        } else {
            for part in line.split_commas() {
                positional.push((p.rational(part)?, part));
            }
        }
    }
    if !positional.is_empty() {
        if initial.iter().any(Option::is_some) {
            return Err(p.err(*init_head, "mix of named and positional initial values"));
        }
        if positional.len() != n {
            return Err(p.err(
                positional[0].1,
                format!("expected {n} initial values, found {}", positional.len()),
            ));
        }
        initial = positional.into_iter().map(|(v, _)| Some(v)).collect();
    }
    let initial = initial
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| p.err(*init_head, format!("missing initial value for `{}`", ctx.name(i)))))
        .collect::<CliResult<Vec<_>>>()?;

    let guards = match section("guard") {
        Some((_, _, lines)) => lines.iter().map(|l| p.poly(*l, &ctx)).collect::<CliResult<Vec<_>>>()?,
        None => Vec::new(),
    };

    let (_, inv_head, inv_lines) = section("invariants").ok_or_else(|| p.err(end, "missing [invariants] section"))?;
    let mut invariants = Vec::new();
    for line in inv_lines {
        let poly = match line.text.find('=') {
            Some(eq) => {
                let (lhs, rhs) = line.split_at_char(eq);
                &p.poly(lhs, &ctx)? - &p.poly(rhs, &ctx)?
            }
            None => p.poly(*line, &ctx)?,
        };
        invariants.push(poly);
    }
    if invariants.is_empty() {
        return Err(p.err(*inv_head, "at least one invariant is required"));
    }

    let body = match (section("generators"), section("update")) {
        (Some(_), Some((_, head, _))) => return Err(p.err(*head, "both [generators] and [update] given")),
        (None, None) => return Err(p.err(end, "missing [generators] or [update] section")),
        (Some((_, head, lines)), None) => {
            let mut gens: Vec<Option<Vec<Polynomial>>> = vec![None; n];
            for line in lines {
                let (i, rest) = p.labelled(*line, &ctx)?;
                if gens[i].is_some() {
                    return Err(p.err(*line, format!("generators of `{}` given twice", ctx.name(i))));
                }
                let list = rest
                    .split_commas()
                    .into_iter()
                    .map(|s| p.poly(s, &ctx))
                    .collect::<CliResult<Vec<_>>>()?;
                gens[i] = Some(list);
            }
            Body::Template(
                gens.into_iter()
                    .enumerate()
                    .map(|(i, g)| g.ok_or_else(|| p.err(*head, format!("missing generators for `{}`", ctx.name(i)))))
                    .collect::<CliResult<_>>()?,
            )
        }
        (None, Some((_, head, lines))) => {
            let mut update: Vec<Option<Polynomial>> = vec![None; n];
            for line in lines {
                let (i, rest) = p.labelled(*line, &ctx)?;
                if update[i].is_some() {
                    return Err(p.err(*line, format!("update of `{}` given twice", ctx.name(i))));
                }
                update[i] = Some(p.poly(rest, &ctx)?);
            }
            Body::Update(
                update
                    .into_iter()
                    .enumerate()
                    .map(|(i, u)| u.ok_or_else(|| p.err(*head, format!("missing update for `{}`", ctx.name(i)))))
                    .collect::<CliResult<_>>()?,
            )
        }
    };

    let mut settings = Settings::default();
    let mut name = std::path::Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "problem".into());
    if let Some((_, _, lines)) = section("settings") {
        for line in lines {
            let eq = line.text.find('=').ok_or_else(|| p.err(*line, "expected `key = value`"))?;
            let (key, value) = line.split_at_char(eq);
            let (key, value) = (key.trimmed(), value.trimmed());
            let bad = || p.err(value, format!("invalid value `{}` for `{}`", value.text, key.text));
            match key.text {
                "name" => name = value.text.to_string(),
                "domain" => settings.domain = Some(parse_domain(value.text).ok_or_else(bad)?),
                "policy" => settings.policy = Some(parse_policy(value.text).ok_or_else(bad)?),
                "synth_budget" => settings.synth_budget = Some(parse_seconds(value.text).ok_or_else(bad)?),
                "solver_budget" => settings.solver_budget = Some(parse_seconds(value.text).ok_or_else(bad)?),
                "max_rounds" => {
                    settings.max_rounds = Some(value.text.parse().ok().filter(|&r: &usize| r > 0).ok_or_else(bad)?)
                }
                other => return Err(p.err(key, format!("unknown setting `{other}`"))),
            }
        }
    }

    Ok(Problem {
        name,
        variables: ctx,
        initial,
        guards,
        invariants,
        body,
        settings,
    })
}

impl Problem {
    pub fn n(&self) -> usize {
        self.variables.len()
    }

    /// Product of the guards (1 when there are none).
    pub fn guard(&self) -> Polynomial {
        self.guards
            .iter()
            .fold(Polynomial::one(&self.variables), |acc, h| &acc * h)
    }

    pub fn invariant_spec(&self) -> CliResult<InvariantSpec> {
        Ok(InvariantSpec::new(self.invariants.clone())?)
    }

    pub fn template(&self) -> CliResult<LoopTemplate> {
        match &self.body {
            Body::Template(gens) => self.template_with(gens.clone()),
            Body::Update(_) => Err(CliError::Usage(format!(
                "{}: has an [update] section; `synth` needs [generators]",
                self.name
            ))),
        }
    }

    /// The problem's loop shape with the given generator lists.
    pub fn template_with(&self, gens: Vec<Vec<Polynomial>>) -> CliResult<LoopTemplate> {
        Ok(LoopTemplate::new(&self.variables, self.initial.clone(), self.guard(), gens)?)
    }

    pub fn concrete_loop(&self) -> CliResult<ConcreteLoop> {
        match &self.body {
            Body::Update(update) => Ok(ConcreteLoop::new(self.initial.clone(), self.guard(), update.clone())?),
            Body::Template(_) => Err(CliError::Usage(format!(
                "{}: has a [generators] section; `check` needs [update]",
                self.name
            ))),
        }
    }

    /// Maximal total degree of the invariants.
    pub fn invariant_degree(&self) -> u32 {
        self.invariants.iter().filter_map(Polynomial::total_degree).max().unwrap_or(0)
    }

    /// Canonical text form; parsing it back yields an equal problem.
    pub fn to_text(&self) -> String {
        let ctx = &self.variables;
        let mut out = String::new();
        out.push_str("[variables]\n");
        let _ = writeln!(out, "{}", ctx.names().join(", "));
        out.push_str("\n[initial]\n");
        for (name, v) in ctx.names().iter().zip(&self.initial) {
            let _ = writeln!(out, "{name} = {v}");
        }
        if !self.guards.is_empty() {
            out.push_str("\n[guard]\n");
            for h in &self.guards {
                let _ = writeln!(out, "{h}");
            }
        }
        out.push_str("\n[invariants]\n");
        for g in &self.invariants {
            let _ = writeln!(out, "{g}");
        }
        match &self.body {
            Body::Template(gens) => {
                out.push_str("\n[generators]\n");
                for (name, list) in ctx.names().iter().zip(gens) {
                    let items: Vec<String> = list.iter().map(|f| f.to_string()).collect();
                    let _ = writeln!(out, "{name}: {}", items.join(", "));
                }
            }
            Body::Update(update) => {
                out.push_str("\n[update]\n");
                for (name, f) in ctx.names().iter().zip(update) {
                    let _ = writeln!(out, "{name}: {f}");
                }
            }
        }
        out.push_str("\n[settings]\n");
        let _ = writeln!(out, "name = {}", self.name);
        let s = &self.settings;
        if let Some(d) = s.domain {
            let _ = writeln!(out, "domain = {}", domain_name(d));
        }
        if let Some(p) = s.policy {
            let _ = writeln!(out, "policy = {}", policy_name(p));
        }
        if let Some(b) = s.synth_budget {
            let _ = writeln!(out, "synth_budget = {}", b.as_secs_f64());
        }
        if let Some(b) = s.solver_budget {
            let _ = writeln!(out, "solver_budget = {}", b.as_secs_f64());
        }
        if let Some(r) = s.max_rounds {
            let _ = writeln!(out, "max_rounds = {r}");
        }
        out
    }
}

pub fn read_problem(path: &std::path::Path) -> CliResult<Problem> {
    let doc = std::fs::read_to_string(path)?;
    parse_problem(&doc, &path.to_string_lossy())
}
