//! Batch runs over a directory of problem files, laid out like the timing
//! and output-size tables: one row per benchmark, one column pair per
//! template shape `(D, l)`.

use std::path::{Path, PathBuf};

use polyloop_core::polyring::{rat, Monomial, MonomialOrder};
use polyloop_core::{Polynomial, VarContext};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::pipeline::{run_template, Outcome, PipelineConfig, RunReport, SynthStatus};
use crate::problem::{read_problem, Problem};

/// Template shape: generator degree bound `D` and total generator count `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GridCell {
    pub max_degree: u32,
    pub l: usize,
}

pub const STANDARD_GRID: [GridCell; 5] = [
    GridCell { max_degree: 1, l: 3 },
    GridCell { max_degree: 1, l: 4 },
    GridCell { max_degree: 1, l: 5 },
    GridCell { max_degree: 2, l: 2 },
    GridCell { max_degree: 2, l: 3 },
];

/// `standard`, or a comma-separated list such as `1x3,2x2` (`DxL`).
pub fn parse_grid(s: &str) -> Option<Vec<GridCell>> {
    if s.trim() == "standard" {
        return Some(STANDARD_GRID.to_vec());
    }
    s.split(',')
        .map(|cell| {
            let (d, l) = cell.trim().split_once('x')?;
            Some(GridCell {
                max_degree: d.trim().parse().ok().filter(|&d| d >= 1)?,
                l: l.trim().parse().ok().filter(|&l| l >= 1)?,
            })
        })
        .collect()
}

/// All exponent vectors of total degree exactly `deg` in `n` variables.
fn monomials_of_degree(n: usize, deg: u32) -> Vec<Monomial> {
    fn go(n: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == n {
            cur.push(left);
            out.push(Monomial::from_exponents(cur));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            go(n, i + 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 0, deg, &mut Vec::new(), &mut out);
    out
}

/// Generator lists for a grid cell. Variable `i` draws, in order, from
/// `x_i^D, …, x_i`, then the remaining monomials of degree `D` down to 1
/// (degrevlex-descending within a degree), then `1`; slots are dealt
/// round-robin starting at the first variable. `None` when `l < n` or a
/// variable runs out of monomials.
pub fn grid_generators(ctx: &std::sync::Arc<VarContext>, cell: GridCell) -> Option<Vec<Vec<Polynomial>>> {
    let n = ctx.len();
    if cell.l < n {
        return None;
    }
    let mut counts = vec![0; n];
    for k in 0..cell.l {
        counts[k % n] += 1;
    }
    let mut all: Vec<Monomial> = Vec::new();
    for deg in (1..=cell.max_degree).rev() {
        let mut ms = monomials_of_degree(n, deg);
        ms.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(b, a));
        all.extend(ms);
    }
    all.push(Monomial::one(n));
    (0..n)
        .map(|i| {
            let own: Vec<Monomial> = (1..=cell.max_degree).rev().map(|e| Monomial::var(n, i, e)).collect();
            let candidates: Vec<Monomial> = own
                .iter()
                .cloned()
                .chain(all.iter().filter(|m| !own.contains(m)).cloned())
                .collect();
            (counts[i] <= candidates.len()).then(|| {
                candidates[..counts[i]]
                    .iter()
                    .map(|m| Polynomial::from_terms(ctx, [(m.clone(), rat(1))]))
                    .collect()
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Cell {
    /// The shape does not apply to this benchmark.
    NotApplicable,
    Run(Box<RunReport>),
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub name: String,
    pub file: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub d: Option<u32>,
    pub cells: Vec<Cell>,
    /// Set when the file itself could not be read or parsed.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchTable {
    /// Empty when each benchmark ran with its own generators.
    pub grid: Vec<GridCell>,
    pub rows: Vec<BenchRow>,
}

/// Problem files (`*.loop`) in `dir`, sorted by name.
pub fn problem_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(CliError::Usage(format!("{} is not a directory", dir.display())));
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "loop"))
        .collect();
    files.sort();
    Ok(files)
}

fn run_cell(problem: &Problem, cell: Option<GridCell>, cfg: &PipelineConfig) -> Cell {
    let inv = match problem.invariant_spec() {
        Ok(i) => i,
        Err(e) => return Cell::Run(Box::new(error_report(problem, e.to_string()))),
    };
    let template = match cell {
        None => problem.template(),
        Some(c) => match grid_generators(&problem.variables, c) {
            Some(g) => problem.template_with(g),
            None => return Cell::NotApplicable,
        },
    };
    let template = match template {
        Ok(t) => t,
        Err(e) => return Cell::Run(Box::new(error_report(problem, e.to_string()))),
    };
    let mut cfg = cfg.clone();
    if let Some(dir) = &cfg.emit_smt {
        let file = match cell {
            Some(c) => format!("{}_D{}_l{}.smt2", problem.name, c.max_degree, c.l),
            None => format!("{}.smt2", problem.name),
        };
        cfg.emit_smt = Some(dir.join(file));
    }
    let settings = cfg.resolve(&problem.settings);
    Cell::Run(Box::new(run_template(&problem.name, &template, &inv, &cfg, &settings)))
}

fn error_report(problem: &Problem, message: String) -> RunReport {
    crate::pipeline::failed_report(problem, message)
}

/// Runs every problem in `dir` on every grid cell (or on its own template
/// when `grid` is empty). Rows run in parallel; a failure in one row never
/// affects another.
pub fn run_benchmarks(dir: &Path, grid: &[GridCell], cfg: &PipelineConfig) -> CliResult<BenchTable> {
    if let Some(d) = &cfg.emit_smt {
        std::fs::create_dir_all(d)?;
    }
    let files = problem_files(dir)?;
    let parsed: Vec<(PathBuf, CliResult<Problem>)> = files.into_iter().map(|f| {
        let p = read_problem(&f);
        (f, p)
    }).collect();
    let columns: Vec<Option<GridCell>> = if grid.is_empty() {
        vec![None]
    } else {
        grid.iter().copied().map(Some).collect()
    };
    let jobs: Vec<(usize, usize)> = (0..parsed.len())
        .filter(|&i| parsed[i].1.is_ok())
        .flat_map(|i| (0..columns.len()).map(move |c| (i, c)))
        .collect();
    let results: Vec<((usize, usize), Cell)> = jobs
        .par_iter()
        .map(|&(i, c)| {
            let problem = parsed[i].1.as_ref().expect("filtered");
            ((i, c), run_cell(problem, columns[c], cfg))
        })
        .collect();

    let mut rows: Vec<BenchRow> = parsed
        .iter()
        .map(|(path, p)| {
            let file = path.display().to_string();
            match p {
                Ok(p) => BenchRow {
                    name: p.name.clone(),
                    file,
                    n: Some(p.n()),
                    m: Some(p.invariants.len()),
                    d: Some(p.invariant_degree()),
                    cells: Vec::with_capacity(columns.len()),
                    error: None,
                },
                Err(e) => BenchRow {
                    name: path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                    file,
                    n: None,
                    m: None,
                    d: None,
                    cells: Vec::new(),
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    for ((i, _), cell) in results {
        rows[i].cells.push(cell);
    }
    Ok(BenchTable {
        grid: grid.to_vec(),
        rows,
    })
}

fn fmt_seconds(s: f64) -> String {
    if s < 0.01 {
        format!("{s:.3}")
    } else {
        format!("{s:.2}")
    }
}

/// Algorithm column of the timing table.
pub fn alg_marker(cell: &Cell) -> String {
    match cell {
        Cell::NotApplicable => "NA".into(),
        Cell::Run(r) => match r.synthesis {
            SynthStatus::Ok => fmt_seconds(r.synth_seconds),
            SynthStatus::TimeLimit => "TL".into(),
            SynthStatus::Error => "ERR".into(),
        },
    }
}

/// Solver column: time on success, `F` when no model was found, `NI` when
/// synthesis did not finish.
pub fn solver_marker(cell: &Cell) -> String {
    match cell {
        Cell::NotApplicable => "NA".into(),
        Cell::Run(r) => match r.outcome {
            Outcome::Sat => r.solve_seconds.map_or_else(|| "trivial".into(), fmt_seconds),
            Outcome::Unsat => "unsat".into(),
            Outcome::Unknown => "F".into(),
            Outcome::Timeout => "TL".into(),
            Outcome::SolverUnavailable => "-".into(),
            Outcome::NotInvoked => "NI".into(),
            Outcome::Error => "ERR".into(),
        },
    }
}

/// `s` and solution-count columns of the output-size table.
pub fn size_markers(cell: &Cell) -> (String, String) {
    match cell {
        Cell::NotApplicable => ("NA".into(), "NA".into()),
        Cell::Run(r) => match r.synthesis {
            SynthStatus::TimeLimit => ("TL".into(), "TL".into()),
            SynthStatus::Error => ("ERR".into(), "ERR".into()),
            SynthStatus::Ok => {
                let sols = match r.finiteness.as_deref() {
                    Some("finite") => "<inf",
                    Some("infinite") => "inf",
                    _ => "?",
                };
                (r.s.map_or("?".into(), |s| s.to_string()), sols.into())
            }
        },
    }
}

impl BenchTable {
    fn column_labels(&self) -> Vec<String> {
        if self.grid.is_empty() {
            vec!["own template".into()]
        } else {
            self.grid.iter().map(|c| format!("D={}, l={}", c.max_degree, c.l)).collect()
        }
    }

    /// Long format: one record per benchmark and column.
    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "benchmark", "n", "m", "d", "D", "l", "synthesis", "alg_seconds", "rounds", "s", "finiteness",
            "outcome", "solver_seconds", "verified", "alg", "solver", "error",
        ])?;
        let opt = |v: Option<String>| v.unwrap_or_default();
        for row in &self.rows {
            let head = [
                row.name.clone(),
                opt(row.n.map(|v| v.to_string())),
                opt(row.m.map(|v| v.to_string())),
                opt(row.d.map(|v| v.to_string())),
            ];
            if let Some(e) = &row.error {
                let mut rec = head.to_vec();
                rec.extend(std::iter::repeat_n(String::new(), 12));
                rec.push(e.clone());
                w.write_record(&rec)?;
                continue;
            }
            for (k, cell) in row.cells.iter().enumerate() {
                let (big_d, l) = match self.grid.get(k) {
                    Some(c) => (c.max_degree.to_string(), c.l.to_string()),
                    None => match cell {
                        Cell::Run(r) => (r.generator_degree.to_string(), r.l.to_string()),
                        Cell::NotApplicable => (String::new(), String::new()),
                    },
                };
                let mut rec = head.to_vec();
                rec.extend([big_d, l]);
                match cell {
                    Cell::NotApplicable => {
                        rec.extend(["NA".to_string()]);
                        rec.extend(std::iter::repeat_n(String::new(), 7));
                        rec.extend(["NA".to_string(), "NA".to_string(), String::new()]);
                    }
                    Cell::Run(r) => rec.extend([
                        format!("{:?}", r.synthesis).to_lowercase(),
                        format!("{:.6}", r.synth_seconds),
                        opt(r.rounds.map(|v| v.to_string())),
                        opt(r.s.map(|v| v.to_string())),
                        opt(r.finiteness.clone()),
                        r.outcome.label().to_string(),
                        opt(r.solve_seconds.map(|v| format!("{v:.6}"))),
                        r.verified.to_string(),
                        alg_marker(cell),
                        solver_marker(cell),
                        if r.outcome == Outcome::Error || r.synthesis == SynthStatus::Error {
                            r.diagnostics.join("; ")
                        } else {
                            String::new()
                        },
                    ]),
                }
                w.write_record(&rec)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Two aligned text tables: timings, then output sizes.
    pub fn to_pretty(&self) -> String {
        let labels = self.column_labels();
        let timing = self.render(&labels, ("Alg", "Solver"), |c| (alg_marker(c), solver_marker(c)));
        let sizes = self.render(&labels, ("s", "#sols"), size_markers);
        format!("Timings (seconds)\n{timing}\nOutput systems\n{sizes}")
    }

    fn render(&self, labels: &[String], sub: (&str, &str), f: impl Fn(&Cell) -> (String, String)) -> String {
        let mut grid: Vec<Vec<String>> = Vec::new();
        let mut head = vec!["Benchmark".to_string(), "n".into(), "m".into(), "d".into()];
        let mut head2 = vec![String::new(); 4];
        for label in labels {
            head.extend([label.clone(), String::new()]);
            head2.extend([sub.0.to_string(), sub.1.to_string()]);
        }
        grid.push(head);
        grid.push(head2);
        for row in &self.rows {
            let show = |v: Option<String>| v.unwrap_or_else(|| "?".into());
            let mut line = vec![
                row.name.clone(),
                show(row.n.map(|v| v.to_string())),
                show(row.m.map(|v| v.to_string())),
                show(row.d.map(|v| v.to_string())),
            ];
            if let Some(e) = &row.error {
                line.push(format!("error: {e}"));
            } else {
                for c in &row.cells {
                    let (a, b) = f(c);
                    line.extend([a, b]);
                }
            }
            grid.push(line);
        }
        let cols = grid.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..cols)
            .map(|j| {
                grid.iter()
                    .filter(|r| r.len() == cols || j < r.len().saturating_sub(1))
                    .filter_map(|r| r.get(j))
                    .map(|s| s.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for r in &grid {
            let cells: Vec<String> = r
                .iter()
                .enumerate()
                .map(|(j, s)| format!("{s:<w$}", w = widths.get(j).copied().unwrap_or(0)))
                .collect();
            out.push_str(cells.join(" | ").trim_end());
            out.push('\n');
        }
        out
    }
}
