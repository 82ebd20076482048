use std::path::Path;
use std::process::Command;
use std::time::Duration;

use polyloop_cli::bench::{grid_generators, parse_grid, run_benchmarks, Cell, GridCell, STANDARD_GRID};
use polyloop_cli::pipeline::{run_check, run_pipeline, Outcome, PipelineConfig, SynthStatus};
use polyloop_cli::problem::{parse_problem, Body, Settings};
use polyloop_cli::CliError;
use polyloop_core::polyring::{parse_polynomial, VarContext};
use polyloop_core::solve::smtlib::parse_script;
use polyloop_core::solve::SmtSolver;
use proptest::prelude::*;

const EXAMPLE: &str = "\
# three-variable example
[variables]
x1, x2, x3
[initial]
1, 1, -1
[invariants]
x2^2 - x1
x3^3 + 2*x2^2 = x1
[generators]
x1: x1^3, x2^2
x2: x1, x2^2
x3: x1
[settings]
name = example
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polyloop"))
}

fn benchmarks_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../benchmarks"))
}

fn no_solver() -> PipelineConfig {
    PipelineConfig::default()
}

#[test]
fn example_file_shape() {
    let p = parse_problem(EXAMPLE, "example.loop").unwrap();
    assert_eq!(p.name, "example");
    assert_eq!(p.n(), 3);
    let Body::Template(gens) = &p.body else { panic!("expected a template") };
    assert_eq!(gens.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 2, 1]);
    assert_eq!(p.invariants[1], parse_polynomial("x3^3 + 2*x2^2 - x1", &p.variables).unwrap());
    assert_eq!(p.invariant_degree(), 3);
}

#[test]
fn round_trip_through_text() {
    let p = parse_problem(EXAMPLE, "example.loop").unwrap();
    let again = parse_problem(&p.to_text(), "again.loop").unwrap();
    assert_eq!(p, again);
    for entry in std::fs::read_dir(benchmarks_dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let p = parse_problem(&text, &path.display().to_string()).unwrap();
        assert_eq!(parse_problem(&p.to_text(), "x").unwrap(), p, "{}", path.display());
    }
}

#[test]
fn syntax_errors_carry_positions() {
    let doc = "[variables]\nx, y\n[initial]\n0, 0\n[invariants]\nx - y^\n";
    match parse_problem(doc, "bad.loop").unwrap_err() {
        CliError::Syntax { line, .. } => assert_eq!(line, 6),
        other => panic!("unexpected {other:?}"),
    }
    let undeclared = "[variables]\nx, y\n[initial]\n0, 0\n[invariants]\nx - y\n[generators]\nx: x9\ny: y\n";
    let err = parse_problem(undeclared, "u.loop").unwrap_err();
    assert!(matches!(err, CliError::Syntax { line: 8, .. }), "{err:?}");
    assert!(err.to_string().contains("x9"));
    assert_eq!(err.exit_code(), 1);
    let arity = "[variables]\nx, y\n[initial]\n0\n[invariants]\nx\n[update]\nx: x\ny: y\n";
    assert!(parse_problem(arity, "a.loop").is_err());
    let unknown = "[variables]\nx\n[bogus]\n";
    assert!(matches!(parse_problem(unknown, "b.loop"), Err(CliError::Syntax { line: 3, .. })));
}

#[test]
fn guards_multiply() {
    let doc = "[variables]\nx, y\n[initial]\nx = 0\ny = 0\n[guard]\nx - 5\ny + 1\n[invariants]\nx - y\n[update]\nx: x + 1\ny: y + 1\n";
    let p = parse_problem(doc, "g.loop").unwrap();
    assert_eq!(p.guard(), parse_polynomial("(x - 5)*(y + 1)", &p.variables).unwrap());
    let report = run_check(&p, &no_solver()).unwrap();
    assert_eq!(report.holds, Some(true));
}

#[test]
fn settings_precedence() {
    let doc = "[variables]\nx\n[initial]\n0\n[invariants]\nx\n[update]\nx: x\n[settings]\ndomain = rationals\nsolver_budget = 5\n";
    let p = parse_problem(doc, "s.loop").unwrap();
    let mut cfg = no_solver();
    let r = cfg.resolve(&p.settings);
    assert_eq!(r.solver_budget, Duration::from_secs(5));
    assert_eq!(r.synth_budget, Duration::from_secs(300));
    cfg.overrides = Settings {
        solver_budget: Some(Duration::from_secs(2)),
        ..Settings::default()
    };
    assert_eq!(cfg.resolve(&p.settings).solver_budget, Duration::from_secs(2));
}

#[test]
fn degraded_pipeline_emits_system_and_script() {
    let dir = tempfile::tempdir().unwrap();
    let smt = dir.path().join("out.smt2");
    let p = parse_problem(EXAMPLE, "example.loop").unwrap();
    let report = run_pipeline(
        &p,
        &PipelineConfig {
            emit_smt: Some(smt.clone()),
            ..no_solver()
        },
    );
    assert_eq!(report.synthesis, SynthStatus::Ok);
    assert_eq!(report.s, Some(4));
    assert_eq!(report.l, 5);
    assert_eq!(report.finiteness.as_deref(), Some("infinite"));
    assert_eq!(report.outcome, Outcome::SolverUnavailable);
    assert_eq!(report.exit_code(), 0);
    let script = std::fs::read_to_string(&smt).unwrap();
    assert_eq!(parse_script(&script).unwrap().equations.len(), 4);
}

#[test]
fn pipeline_is_deterministic() {
    let p = parse_problem(EXAMPLE, "example.loop").unwrap();
    let a = run_pipeline(&p, &no_solver()).without_timings();
    let b = run_pipeline(&p, &no_solver()).without_timings();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn pipeline_with_solver_verifies() {
    let Some(solver) = SmtSolver::from_env() else {
        eprintln!("no SMT solver available; skipping");
        return;
    };
    let p = parse_problem(EXAMPLE, "example.loop").unwrap();
    let report = run_pipeline(
        &p,
        &PipelineConfig {
            solver: Some(solver),
            ..no_solver()
        },
    );
    assert_eq!(report.outcome, Outcome::Sat);
    assert!(report.verified, "{report:?}");
    assert_eq!(report.assignment.as_ref().map(Vec::len), Some(5));
}

#[test]
fn inconsistent_invariants_are_unsat() {
    // x starts at 0, so x - 1 can never hold.
    let doc = "[variables]\nx\n[initial]\n0\n[invariants]\nx - 1\n[generators]\nx: x, 1\n";
    let p = parse_problem(doc, "c.loop").unwrap();
    let report = run_pipeline(&p, &no_solver());
    assert_eq!(report.outcome, Outcome::Unsat);
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn check_detects_violation() {
    let doc = "[variables]\nx, i\n[initial]\n0, 0\n[invariants]\nx - i^2\n[update]\nx: x + 2*i + 1\ni: i + 1\n";
    let p = parse_problem(doc, "ok.loop").unwrap();
    assert_eq!(run_check(&p, &no_solver()).unwrap().holds, Some(true));
    let bad = doc.replace("x + 2*i + 1", "x + 2*i");
    let p = parse_problem(&bad, "bad.loop").unwrap();
    let report = run_check(&p, &no_solver()).unwrap();
    assert_eq!(report.holds, Some(false));
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn grid_assigns_monomials_round_robin() {
    assert_eq!(parse_grid("standard").unwrap(), STANDARD_GRID.to_vec());
    assert_eq!(
        parse_grid("1x3,2x2").unwrap(),
        vec![GridCell { max_degree: 1, l: 3 }, GridCell { max_degree: 2, l: 2 }]
    );
    assert!(parse_grid("2x").is_none());
    let ctx = VarContext::new(&["x", "y"]).unwrap();
    let gens = grid_generators(&ctx, GridCell { max_degree: 2, l: 3 }).unwrap();
    let shown: Vec<Vec<String>> = gens.iter().map(|g| g.iter().map(|p| p.to_string()).collect()).collect();
    assert_eq!(shown, vec![vec!["x^2", "x"], vec!["y^2"]]);
    let gens = grid_generators(&ctx, GridCell { max_degree: 2, l: 6 }).unwrap();
    let shown: Vec<Vec<String>> = gens.iter().map(|g| g.iter().map(|p| p.to_string()).collect()).collect();
    assert_eq!(shown, vec![vec!["x^2", "x", "x*y"], vec!["y^2", "y", "x^2"]]);
    let three = VarContext::new(&["a", "b", "c"]).unwrap();
    assert!(grid_generators(&three, GridCell { max_degree: 1, l: 2 }).is_none());
}

#[test]
fn bench_isolates_failures() {
    let dir = tempfile::tempdir().unwrap();
    let empty = run_benchmarks(dir.path(), &[], &no_solver()).unwrap();
    assert!(empty.rows.is_empty());

    std::fs::write(dir.path().join("a_square.loop"), std::fs::read_to_string(benchmarks_dir().join("square.loop")).unwrap()).unwrap();
    std::fs::write(dir.path().join("b_broken.loop"), "[variables]\nx\n[initial]\n").unwrap();
    let table = run_benchmarks(dir.path(), &[], &no_solver()).unwrap();
    assert_eq!(table.rows.len(), 2);
    assert!(table.rows[0].error.is_none());
    assert!(table.rows[1].error.is_some());
    let Cell::Run(r) = &table.rows[0].cells[0] else { panic!("expected a run") };
    assert_eq!(r.synthesis, SynthStatus::Ok);

    let grid = [GridCell { max_degree: 1, l: 1 }, GridCell { max_degree: 1, l: 3 }];
    let table = run_benchmarks(dir.path(), &grid, &no_solver()).unwrap();
    assert!(matches!(table.rows[0].cells[0], Cell::NotApplicable));
    assert!(matches!(table.rows[0].cells[1], Cell::Run(_)));
    let csv = table.to_csv().unwrap();
    assert!(csv.lines().next().unwrap().starts_with("benchmark,"));
    assert!(table.to_pretty().contains("a_square") || table.to_pretty().contains("square"));
}

#[test]
fn binary_exit_codes() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["synth", "/nonexistent/file.loop"]).output().unwrap();
    assert_ne!(out.status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.loop");
    std::fs::write(&bad, "[variables]\nx\n[initial]\n0\n[invariants]\nx +\n").unwrap();
    let out = bin().arg("synth").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":6:"));

    let ex2 = benchmarks_dir().join("ex2.loop");
    let out = bin()
        .args(["synth", "--no-solver", "--synth-timeout", "0.01"])
        .arg(&ex2)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));

    let square = benchmarks_dir().join("square.loop");
    let smt = dir.path().join("square.smt2");
    let out = bin()
        .args(["synth", "--no-solver", "--json", "--emit-smt"])
        .arg(&smt)
        .arg(&square)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["synthesis"], "ok");
    assert!(smt.exists());

    let csv = dir.path().join("table.csv");
    let out = bin().args(["bench", "--no-solver", "--csv"]).arg(&csv).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("benchmark,"));
}

fn arb_poly_text() -> impl Strategy<Value = String> {
    let term = (-9i64..=9, 0u32..=3, 0u32..=2).prop_map(|(c, a, b)| format!("{c}*x^{a}*y^{b}"));
    prop::collection::vec(term, 1..4).prop_map(|ts| ts.join(" + "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_files_round_trip(
        init in prop::collection::vec(-20i64..=20, 2),
        invs in prop::collection::vec(arb_poly_text(), 1..3),
        upd in prop::collection::vec(arb_poly_text(), 2),
    ) {
        let doc = format!(
            "[variables]\nx, y\n[initial]\n{}, {}\n[invariants]\n{}\n[update]\nx: {}\ny: {}\n",
            init[0], init[1], invs.join("\n"), upd[0], upd[1]
        );
        match parse_problem(&doc, "p.loop") {
            Ok(p) => prop_assert_eq!(parse_problem(&p.to_text(), "q.loop").unwrap(), p),
            // Invariants that cancel to zero are rejected.
            Err(e) => prop_assert!(matches!(e, CliError::Syntax { .. } | CliError::Core(_)), "{e:?}"),
        }
    }
}
