use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use num_traits::Zero;

use super::smtlib::{emit_smtlib, parse_response};
use super::{SolveOutcome, SolveRequest, SolveStatus};
use crate::error::{Error, Result};
use crate::polyring::Rational;

/// Environment variable holding the solver command line, e.g. `z3 -in`.
pub const SOLVER_ENV: &str = "POLYLOOP_SMT_SOLVER";

/// An external SMT-LIB2 solver, described by an argv template. If an argument
/// contains `{file}` the script is written to a temporary file whose path
/// replaces the placeholder; otherwise the script is piped to stdin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmtSolver {
    argv: Vec<String>,
}

/// Raw result of one solver process.
#[derive(Debug, Clone)]
pub struct SolverRun {
    pub stdout: String,
    pub stderr: String,
    pub timed_out: bool,
}

impl SmtSolver {
    pub fn new(argv: Vec<String>) -> Self {
        assert!(!argv.is_empty(), "solver argv must name a program");
        SmtSolver { argv }
    }

    /// Z3 reading the script from stdin.
    pub fn z3(program: &str) -> Self {
        Self::new(vec![program.to_string(), "-in".into(), "-smt2".into()])
    }

    /// Parses a whitespace-separated command line.
    pub fn from_command_line(cmd: &str) -> Option<Self> {
        let argv: Vec<String> = cmd.split_whitespace().map(str::to_string).collect();
        (!argv.is_empty()).then(|| Self::new(argv))
    }

    /// Solver from [`SOLVER_ENV`], falling back to `z3` on the `PATH`.
    pub fn from_env() -> Option<Self> {
        if let Ok(cmd) = std::env::var(SOLVER_ENV) {
            return Self::from_command_line(&cmd);
        }
        let path = std::env::var_os("PATH")?;
        std::env::split_paths(&path)
            .map(|d| d.join("z3"))
            .find(|p| p.is_file())
            .map(|p| Self::z3(&p.to_string_lossy()))
    }

    pub fn argv(&self) -> &[String] {
        &self.argv
    }

    /// Runs the solver on `script`, killing it after `timeout`.
    pub fn run(&self, script: &str, timeout: Duration) -> Result<SolverRun> {
        let uses_file = self.argv.iter().any(|a| a.contains("{file}"));
        let file = if uses_file {
            let mut f = tempfile::Builder::new().suffix(".smt2").tempfile()?;
            f.write_all(script.as_bytes())?;
            f.flush()?;
            Some(f)
        } else {
            None
        };
        let args: Vec<String> = self.argv[1..]
            .iter()
            .map(|a| match &file {
                Some(f) => a.replace("{file}", &f.path().to_string_lossy()),
                None => a.clone(),
            })
            .collect();
        let mut child = Command::new(&self.argv[0])
            .args(&args)
            .stdin(if uses_file { Stdio::null() } else { Stdio::piped() })
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound | std::io::ErrorKind::PermissionDenied => {
                    Error::SolverUnavailable(format!("{}: {e}", self.argv[0]))
                }
                _ => Error::Io(e.to_string()),
            })?;

        if let Some(mut stdin) = child.stdin.take() {
            let script = script.to_string();
            thread::spawn(move || {
                let _ = stdin.write_all(script.as_bytes());
            });
        }
        let mut out_pipe = child.stdout.take().unwrap();
        let mut err_pipe = child.stderr.take().unwrap();
        let out_reader = thread::spawn(move || {
            let mut s = String::new();
            let _ = out_pipe.read_to_string(&mut s);
            s
        });
        let err_reader = thread::spawn(move || {
            let mut s = String::new();
            let _ = err_pipe.read_to_string(&mut s);
            s
        });

        let deadline = Instant::now() + timeout;
        let mut timed_out = false;
        loop {
            if child.try_wait()?.is_some() {
                break;
            }
            if Instant::now() >= deadline {
                let _ = child.kill();
                let _ = child.wait();
                timed_out = true;
                break;
            }
            thread::sleep(Duration::from_millis(2));
        }
        Ok(SolverRun {
            stdout: out_reader.join().unwrap_or_default(),
            stderr: err_reader.join().unwrap_or_default(),
            timed_out,
        })
    }
}

/// Emits the request as SMT-LIB2, runs the solver and verifies any model
/// exactly before reporting `sat`. A model that fails verification is an
/// error, never a result.
pub fn run_external_solver(solver: &SmtSolver, req: &SolveRequest<'_>) -> Result<SolveOutcome> {
    let script = emit_smtlib(req)?;
    let run = match solver.run(&script, req.timeout) {
        Ok(r) => r,
        Err(Error::SolverUnavailable(msg)) => {
            return Ok(SolveOutcome {
                status: SolveStatus::SolverUnavailable,
                diagnostics: msg,
            })
        }
        Err(e) => return Err(e),
    };
    if run.timed_out {
        return Ok(SolveOutcome {
            status: SolveStatus::Unknown,
            diagnostics: format!("timed out after {:?}", req.timeout),
        });
    }
    let response = parse_response(&run.stdout).map_err(|e| match e {
        Error::MalformedModel(m) => Error::MalformedModel(format!("{m}; stderr: {}", run.stderr.trim())),
        other => other,
    })?;
    let status = match response.status.as_str() {
        "unsat" => SolveStatus::Unsat,
        "unknown" => SolveStatus::Unknown,
        _ => {
            let ctx = req.system.context();
            let b: Vec<Rational> = ctx
                .names()
                .iter()
                .map(|n| response.model.get(n).cloned().unwrap_or_else(Rational::zero))
                .collect();
            req.verify(&b)?;
            SolveStatus::Sat(b)
        }
    };
    Ok(SolveOutcome {
        status,
        diagnostics: run.stdout,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_binary_is_reported() {
        let s = SmtSolver::new(vec!["/nonexistent/solver-binary".into()]);
        assert!(matches!(
            s.run("(check-sat)", Duration::from_secs(1)),
            Err(Error::SolverUnavailable(_))
        ));
    }

    #[test]
    fn command_line_parsing() {
        let s = SmtSolver::from_command_line("z3 -smt2 {file}").unwrap();
        assert_eq!(s.argv(), ["z3", "-smt2", "{file}"]);
        assert!(SmtSolver::from_command_line("   ").is_none());
    }
}
