//! generate → classify → solve → verify, recorded in a serializable report.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use polyloop_core::solve::{classify_finiteness, emit_smtlib, run_external_solver, SmtSolver};
use polyloop_core::synthesis::{check_invariants, generate_loops, simulate, Simulation};
use polyloop_core::{
    Budget, InvariantSpec, LoopTemplate, NonzeroPolicy, Rational, SolveDomain, SolveRequest, SolveStatus,
    SynthesisSystem, DEFAULT_MAX_ROUNDS,
};
use serde::Serialize;

use crate::problem::{Problem, Settings};

pub const DEFAULT_SYNTH_BUDGET: Duration = Duration::from_secs(300);
pub const DEFAULT_SOLVER_BUDGET: Duration = Duration::from_secs(60);
pub const DEFAULT_SIMULATION_STEPS: usize = 10;

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Command-line values; they take precedence over a file's `[settings]`.
    pub overrides: Settings,
    pub max_steps: Option<u64>,
    pub solver: Option<SmtSolver>,
    /// Where to write the SMT-LIB2 script, if anywhere.
    pub emit_smt: Option<PathBuf>,
    pub simulation_steps: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            overrides: Settings::default(),
            max_steps: None,
            solver: None,
            emit_smt: None,
            simulation_steps: DEFAULT_SIMULATION_STEPS,
        }
    }
}

/// Settings after merging command line, file, and defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolved {
    pub domain: SolveDomain,
    pub policy: NonzeroPolicy,
    pub synth_budget: Duration,
    pub solver_budget: Duration,
    pub max_rounds: usize,
}

impl PipelineConfig {
    pub fn resolve(&self, file: &Settings) -> Resolved {
        let o = &self.overrides;
        Resolved {
            domain: o.domain.or(file.domain).unwrap_or(SolveDomain::Integers),
            policy: o.policy.or(file.policy).unwrap_or_default(),
            synth_budget: o.synth_budget.or(file.synth_budget).unwrap_or(DEFAULT_SYNTH_BUDGET),
            solver_budget: o.solver_budget.or(file.solver_budget).unwrap_or(DEFAULT_SOLVER_BUDGET),
            max_rounds: o.max_rounds.or(file.max_rounds).unwrap_or(DEFAULT_MAX_ROUNDS),
        }
    }

    fn budget(&self, r: &Resolved) -> Budget {
        let b = Budget::with_timeout(r.synth_budget).rounds(r.max_rounds);
        match self.max_steps {
            Some(s) => b.steps(s),
            None => b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthStatus {
    Ok,
    /// Budget exhausted.
    TimeLimit,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Sat,
    Unsat,
    /// The solver answered `unknown`.
    Unknown,
    /// The solver ran out of time.
    Timeout,
    SolverUnavailable,
    /// Synthesis did not finish, so nothing was solved.
    NotInvoked,
    Error,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Sat => "sat",
            Outcome::Unsat => "unsat",
            Outcome::Unknown => "unknown",
            Outcome::Timeout => "timeout",
            Outcome::SolverUnavailable => "solver-unavailable",
            Outcome::NotInvoked => "NI",
            Outcome::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub var: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub d: u32,
    /// Maximal degree of the template generators.
    pub generator_degree: u32,
    /// Number of template coefficients.
    pub l: usize,
    pub synthesis: SynthStatus,
    pub rounds: Option<usize>,
    /// Invariant-set polynomials before substitution.
    pub q_count: Option<usize>,
    /// Nonzero polynomials after substitution.
    pub s: Option<usize>,
    pub finiteness: Option<String>,
    pub system: Vec<String>,
    pub synth_seconds: f64,
    pub solve_seconds: Option<f64>,
    pub outcome: Outcome,
    pub assignment: Option<Vec<Binding>>,
    pub update: Option<Vec<String>>,
    pub verified: bool,
    pub simulation: Option<String>,
    pub smt_script: Option<String>,
    pub diagnostics: Vec<String>,
}

impl RunReport {
    /// 0 when the pipeline ran (whatever the answer), 2 on budget
    /// exhaustion, 3 on internal errors.
    pub fn exit_code(&self) -> i32 {
        match (self.synthesis, self.outcome) {
            (SynthStatus::TimeLimit, _) | (_, Outcome::Timeout) => 2,
            (SynthStatus::Error, _) | (_, Outcome::Error) => 3,
            _ => 0,
        }
    }

    /// The report without wall-clock fields, for determinism checks.
    pub fn without_timings(&self) -> RunReport {
        RunReport {
            synth_seconds: 0.0,
            solve_seconds: self.solve_seconds.map(|_| 0.0),
            ..self.clone()
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "problem {} (n={}, m={}, d={}, D={}, l={})\n",
            self.name, self.n, self.m, self.d, self.generator_degree, self.l
        );
        match self.synthesis {
            SynthStatus::Ok => {
                out += &format!(
                    "synthesis: {} rounds, {} invariant-set polynomials, s={} ({:.3}s)\n",
                    self.rounds.unwrap_or(0),
                    self.q_count.unwrap_or(0),
                    self.s.unwrap_or(0),
                    self.synth_seconds
                );
                for (i, p) in self.system.iter().enumerate() {
                    out += &format!("  P{} = {p}\n", i + 1);
                }
                if let Some(f) = &self.finiteness {
                    out += &format!("solutions: {f}\n");
                }
            }
            SynthStatus::TimeLimit => out += &format!("synthesis: TL ({:.3}s)\n", self.synth_seconds),
            SynthStatus::Error => out += "synthesis: error\n",
        }
        out += &format!("outcome: {}", self.outcome.label());
        if let Some(t) = self.solve_seconds {
            out += &format!(" ({t:.3}s)");
        }
        out.push('\n');
        if let Some(b) = &self.assignment {
            let parts: Vec<String> = b.iter().map(|b| format!("{} = {}", b.var, b.value)).collect();
            out += &format!("assignment: {}\n", parts.join(", "));
        }
        if let Some(u) = &self.update {
            out += "loop update:\n";
            for line in u {
                out += &format!("  {line}\n");
            }
            out += &format!("verified: {}\n", self.verified);
        }
        if let Some(path) = &self.smt_script {
            out += &format!("smt-lib2 script: {path}\n");
        }
        for d in &self.diagnostics {
            out += &format!("note: {d}\n");
        }
        out
    }
}

fn seconds(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

/// Runs the whole pipeline on the problem's own template.
pub fn run_pipeline(problem: &Problem, cfg: &PipelineConfig) -> RunReport {
    match (problem.template(), problem.invariant_spec()) {
        (Ok(t), Ok(inv)) => run_template(&problem.name, &t, &inv, cfg, &cfg.resolve(&problem.settings)),
        (Err(e), _) | (_, Err(e)) => failed_report(problem, e.to_string()),
    }
}

pub(crate) fn failed_report(problem: &Problem, message: String) -> RunReport {
    RunReport {
        name: problem.name.clone(),
        n: problem.n(),
        m: problem.invariants.len(),
        d: problem.invariant_degree(),
        generator_degree: 0,
        l: 0,
        synthesis: SynthStatus::Error,
        rounds: None,
        q_count: None,
        s: None,
        finiteness: None,
        system: Vec::new(),
        synth_seconds: 0.0,
        solve_seconds: None,
        outcome: Outcome::Error,
        assignment: None,
        update: None,
        verified: false,
        simulation: None,
        smt_script: None,
        diagnostics: vec![message],
    }
}

/// The pipeline for an explicit template.
pub fn run_template(
    name: &str,
    t: &LoopTemplate,
    inv: &InvariantSpec,
    cfg: &PipelineConfig,
    settings: &Resolved,
) -> RunReport {
    let mut report = RunReport {
        name: name.to_string(),
        n: t.n(),
        m: inv.polys().len(),
        d: inv.max_degree(),
        generator_degree: t.max_generator_degree(),
        l: t.num_coefficients(),
        synthesis: SynthStatus::Ok,
        rounds: None,
        q_count: None,
        s: None,
        finiteness: None,
        system: Vec::new(),
        synth_seconds: 0.0,
        solve_seconds: None,
        outcome: Outcome::NotInvoked,
        assignment: None,
        update: None,
        verified: false,
        simulation: None,
        smt_script: None,
        diagnostics: Vec::new(),
    };

    let start = Instant::now();
    let budget = cfg.budget(settings);
    let system = match generate_loops(t, inv, &budget) {
        Ok(s) => s,
        Err(e) => {
            report.synth_seconds = seconds(start);
            report.synthesis = if e.is_budget_exceeded() {
                SynthStatus::TimeLimit
            } else {
                report.outcome = Outcome::Error;
                SynthStatus::Error
            };
            report.diagnostics.push(e.to_string());
            return report;
        }
    };
    report.synth_seconds = seconds(start);
    report.rounds = Some(system.rounds());
    report.q_count = Some(system.invariant_polys().len());
    report.s = Some(system.len());
    report.system = system.polys().iter().map(|p| p.to_string()).collect();

    match classify_finiteness(&system, &cfg.budget(settings)) {
        Ok(f) => report.finiteness = Some(f.label().to_string()),
        Err(e) => report.diagnostics.push(format!("finiteness: {e}")),
    }

    solve_and_verify(&mut report, t, inv, &system, cfg, settings);
    report
}

fn trivial_assignment(l: usize, policy: NonzeroPolicy) -> Vec<Rational> {
    let fill = if policy == NonzeroPolicy::None { 0 } else { 1 };
    vec![Rational::from_integer(fill.into()); l]
}

fn solve_and_verify(
    report: &mut RunReport,
    t: &LoopTemplate,
    inv: &InvariantSpec,
    system: &SynthesisSystem,
    cfg: &PipelineConfig,
    settings: &Resolved,
) {
    let mut req = SolveRequest::new(system);
    req.domain = settings.domain;
    req.policy = settings.policy;
    req.timeout = settings.solver_budget;

    if let (Some(path), false) = (&cfg.emit_smt, system.is_empty()) {
        match emit_smtlib(&req).map_err(|e| e.to_string()).and_then(|script| {
            std::fs::write(path, script).map_err(|e| format!("{}: {e}", path.display()))
        }) {
            Ok(()) => report.smt_script = Some(path.display().to_string()),
            Err(e) => report.diagnostics.push(format!("could not write SMT-LIB2 script: {e}")),
        }
    }

    let start = Instant::now();
    let assignment = if system.is_empty() {
        report.diagnostics.push("empty system: every coefficient vector works".into());
        let b = trivial_assignment(system.num_vars(), settings.policy);
        if !settings.policy.admits(&b) {
            report.outcome = Outcome::Unsat;
            return;
        }
        b
    } else if system.is_trivially_inconsistent() {
        report.diagnostics.push("system contains a nonzero constant".into());
        report.outcome = Outcome::Unsat;
        return;
    } else {
        let Some(solver) = &cfg.solver else {
            report.outcome = Outcome::SolverUnavailable;
            report.diagnostics.push("no SMT solver configured".into());
            return;
        };
        let outcome = run_external_solver(solver, &req);
        report.solve_seconds = Some(seconds(start));
        match outcome {
            Ok(o) => match o.status {
                SolveStatus::Sat(b) => b,
                SolveStatus::Unsat => {
                    report.outcome = Outcome::Unsat;
                    return;
                }
                SolveStatus::Unknown => {
                    report.outcome = if o.diagnostics.starts_with("timed out") {
                        Outcome::Timeout
                    } else {
                        Outcome::Unknown
                    };
                    report.diagnostics.push(o.diagnostics);
                    return;
                }
                SolveStatus::SolverUnavailable => {
                    report.outcome = Outcome::SolverUnavailable;
                    report.diagnostics.push(o.diagnostics);
                    return;
                }
            },
            Err(e) => {
                report.outcome = Outcome::Error;
                report.diagnostics.push(e.to_string());
                return;
            }
        }
    };
    report.outcome = Outcome::Sat;
    let ctx = system.context();
    report.assignment = Some(
        ctx.names()
            .iter()
            .zip(&assignment)
            .map(|(v, b)| Binding {
                var: v.clone(),
                value: b.to_string(),
            })
            .collect(),
    );
    verify(report, t, inv, &assignment, cfg, settings);
}

fn verify(
    report: &mut RunReport,
    t: &LoopTemplate,
    inv: &InvariantSpec,
    b: &[Rational],
    cfg: &PipelineConfig,
    settings: &Resolved,
) {
    let l = match t.instantiate(b) {
        Ok(l) => l,
        Err(e) => {
            report.diagnostics.push(format!("instantiation failed: {e}"));
            return;
        }
    };
    let names = l.context().names().to_vec();
    report.update = Some(
        names
            .iter()
            .zip(l.update())
            .map(|(x, f)| format!("{x} <- {f}"))
            .collect(),
    );
    let sim = match simulate(&l, inv, cfg.simulation_steps) {
        Ok(s) => s,
        Err(e) => {
            report.diagnostics.push(format!("simulation failed: {e}"));
            return;
        }
    };
    report.simulation = Some(match &sim {
        Simulation::Holds { steps, terminated } => {
            format!("holds for {steps} steps{}", if *terminated { " (terminated)" } else { "" })
        }
        Simulation::Violated { step } => format!("violated at step {step}"),
    });
    let checked = check_invariants(&l, inv, &cfg.budget(settings));
    match checked {
        Ok(c) => report.verified = sim.holds() && c,
        Err(e) => report.diagnostics.push(format!("invariant check: {e}")),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    /// `None` when the exact check ran out of budget.
    pub holds: Option<bool>,
    pub simulation: String,
    pub seconds: f64,
    pub diagnostics: Vec<String>,
}

impl CheckReport {
    pub fn exit_code(&self) -> i32 {
        if self.holds.is_none() {
            2
        } else {
            0
        }
    }

    pub fn to_text(&self) -> String {
        let verdict = match self.holds {
            Some(true) => "invariants hold",
            Some(false) => "invariants do not hold",
            None => "TL",
        };
        let mut out = format!("{}: {verdict} ({:.3}s)\nsimulation: {}\n", self.name, self.seconds, self.simulation);
        for d in &self.diagnostics {
            out += &format!("note: {d}\n");
        }
        out
    }
}

/// Exact invariant check of a concrete loop plus a bounded simulation.
pub fn run_check(problem: &Problem, cfg: &PipelineConfig) -> crate::error::CliResult<CheckReport> {
    let l = problem.concrete_loop()?;
    let inv = problem.invariant_spec()?;
    let settings = cfg.resolve(&problem.settings);
    let start = Instant::now();
    let sim = simulate(&l, &inv, cfg.simulation_steps)?;
    let mut diagnostics = Vec::new();
    let holds = match check_invariants(&l, &inv, &cfg.budget(&settings)) {
        Ok(h) => Some(h),
        Err(e) if e.is_budget_exceeded() => {
            diagnostics.push(e.to_string());
            None
        }
        Err(e) => return Err(e.into()),
    };
    if holds == Some(true) && !sim.holds() {
        diagnostics.push("simulation disagrees with the exact check".into());
    }
    Ok(CheckReport {
        name: problem.name.clone(),
        holds,
        simulation: match sim {
            Simulation::Holds { steps, terminated } => {
                format!("holds for {steps} steps{}", if terminated { " (terminated)" } else { "" })
            }
            Simulation::Violated { step } => format!("violated at step {step}"),
        },
        seconds: seconds(start),
        diagnostics,
    })
}
