use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use polyloop_cli::bench::{parse_grid, run_benchmarks};
use polyloop_cli::pipeline::{run_check, run_pipeline, PipelineConfig, DEFAULT_SIMULATION_STEPS};
use polyloop_cli::problem::{parse_domain, parse_policy, read_problem, Settings};
use polyloop_cli::{CliError, CliResult};
use polyloop_core::solve::SmtSolver;
use polyloop_core::{NonzeroPolicy, SolveDomain};

/// Synthesize polynomial loops that satisfy given polynomial invariants.
#[derive(Parser)]
#[command(name = "polyloop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the coefficient system for a loop template, solve it, and verify the loop found.
    Synth {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
        /// Write the SMT-LIB2 script to this path.
        #[arg(long, value_name = "PATH")]
        emit_smt: Option<PathBuf>,
    },
    /// Decide whether a concrete loop (an `[update]` section) keeps its invariants.
    Check {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run every `*.loop` file in a directory and print timing and size tables.
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        opts: Opts,
        /// Template shapes: `standard` or a list like `1x3,2x2` (D x l). Omit to use each file's generators.
        #[arg(long, value_parser = grid_arg)]
        grid: Option<Vec<polyloop_cli::bench::GridCell>>,
        /// Also write the table as CSV to this path.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
        /// Write one SMT-LIB2 script per run into this directory.
        #[arg(long, value_name = "DIR")]
        emit_smt: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Args)]
struct Opts {
    /// Solution domain: integers or rationals.
    #[arg(long, value_parser = domain_arg)]
    domain: Option<SolveDomain>,
    /// Nonzero policy: vector-nonzero, all-nonzero, coordinate:K, or none.
    #[arg(long, value_parser = policy_arg)]
    policy: Option<NonzeroPolicy>,
    /// Synthesis time budget in seconds [default: 300].
    #[arg(long, value_name = "SECS", value_parser = seconds_arg)]
    synth_timeout: Option<Duration>,
    /// Solver time budget in seconds [default: 60].
    #[arg(long, value_name = "SECS", value_parser = seconds_arg)]
    solver_timeout: Option<Duration>,
    /// Maximum rounds of the invariant-set fixed point [default: 32].
    #[arg(long)]
    max_rounds: Option<usize>,
    /// Maximum Gröbner reduction steps.
    #[arg(long)]
    max_steps: Option<u64>,
    /// Solver command line, e.g. "z3 -in -smt2" or "cvc5 {file}". Defaults to $POLYLOOP_SMT_SOLVER, then z3 on PATH.
    #[arg(long, value_name = "CMD")]
    solver: Option<String>,
    /// Do not call any external solver.
    #[arg(long, conflicts_with = "solver")]
    no_solver: bool,
    /// Simulation horizon used when verifying loops.
    #[arg(long, default_value_t = DEFAULT_SIMULATION_STEPS)]
    sim_steps: usize,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

fn domain_arg(s: &str) -> Result<SolveDomain, String> {
    parse_domain(s).ok_or_else(|| format!("unknown domain `{s}`"))
}

fn policy_arg(s: &str) -> Result<NonzeroPolicy, String> {
    parse_policy(s).ok_or_else(|| format!("unknown policy `{s}`"))
}

fn seconds_arg(s: &str) -> Result<Duration, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(Duration::from_secs_f64(v)),
        _ => Err(format!("expected a positive number of seconds, got `{s}`")),
    }
}

fn grid_arg(s: &str) -> Result<Vec<polyloop_cli::bench::GridCell>, String> {
    parse_grid(s).ok_or_else(|| format!("invalid grid `{s}`"))
}

impl Opts {
    fn config(&self, emit_smt: Option<PathBuf>) -> CliResult<PipelineConfig> {
        let solver = if self.no_solver {
            None
        } else if let Some(cmd) = &self.solver {
            Some(SmtSolver::from_command_line(cmd).ok_or_else(|| CliError::Usage("empty --solver command".into()))?)
        } else {
            SmtSolver::from_env()
        };
        if self.max_rounds == Some(0) {
            return Err(CliError::Usage("--max-rounds must be positive".into()));
        }
        Ok(PipelineConfig {
            overrides: Settings {
                domain: self.domain,
                policy: self.policy,
                synth_budget: self.synth_timeout,
                solver_budget: self.solver_timeout,
                max_rounds: self.max_rounds,
            },
            max_steps: self.max_steps,
            solver,
            emit_smt,
            simulation_steps: self.sim_steps,
        })
    }
}

fn print_json<T: serde::Serialize>(v: &T) -> CliResult<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Synth { file, opts, emit_smt } => {
            let problem = read_problem(&file)?;
            let report = run_pipeline(&problem, &opts.config(emit_smt)?);
            if opts.json {
                print_json(&report)?;
            } else {
                print!("{}", report.to_text());
            }
            Ok(report.exit_code())
        }
        Command::Check { file, opts } => {
            let problem = read_problem(&file)?;
            let report = run_check(&problem, &opts.config(None)?)?;
            if opts.json {
                print_json(&report)?;
            } else {
                print!("{}", report.to_text());
            }
            Ok(report.exit_code())
        }
        Command::Bench {
            dir,
            opts,
            grid,
            csv,
            emit_smt,
            jobs,
        } => {
            let cfg = opts.config(emit_smt)?;
            let grid = grid.unwrap_or_default();
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.unwrap_or(0))
                .build()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let table = pool.install(|| run_benchmarks(&dir, &grid, &cfg))?;
            if let Some(path) = csv {
                std::fs::write(path, table.to_csv()?)?;
            }
            if opts.json {
                print_json(&table)?;
            } else {
                print!("{}", table.to_pretty());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = std::panic::catch_unwind(|| run(cli));
    let code = match result {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        Err(_) => 3,
    };
    ExitCode::from(code as u8)
}
