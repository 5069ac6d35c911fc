//! Command-line front end for huge n-fold programs and 3-way tables.
//!
//! [`run`] holds all command logic so tests can call it without spawning a
//! process. It returns the exit code and the exact bytes meant for stdout
//! and stderr.

pub mod error;
pub mod format;
pub mod gen;

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use nfold_core::huge::presentation_cost;
use nfold_core::{
    build_bipartite_incidence, build_table_instance, check_total_unimodularity, expand_compact,
    huge_feasible, huge_optimize, solve_huge_table, verify_compact, verify_explicit, verify_table,
    HugeInstance, HugeResult, TableResult, TableSolution, TableSpec,
};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::json;

pub use error::CliError;
use format::{Document, SolutionDoc};

/// Default cap on bricks for the explicit check inside `verify`.
pub const DEFAULT_EXPAND_LIMIT: u64 = 1_000;

#[derive(Debug, Parser)]
#[command(
    name = "nfold",
    version,
    about = "Exact solver for huge n-fold integer programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "huge_nfold")]
    HugeNfold,
    #[value(name = "table3")]
    Table3,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide feasibility of an instance.
    Feasible { file: PathBuf },
    /// Solve an instance and print a compact solution.
    Solve {
        file: PathBuf,
        /// Write the solution here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a solution against an instance.
    Verify {
        file: PathBuf,
        solution: PathBuf,
        /// Also expand and check explicitly when there are at most this many bricks.
        #[arg(long, default_value_t = DEFAULT_EXPAND_LIMIT)]
        expand_limit: u64,
    },
    /// List every brick of a compact solution.
    Expand {
        solution: PathBuf,
        #[arg(long)]
        limit: u64,
    },
    /// Generate a feasible random instance.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        types: usize,
        /// Brick count of the first type; later types add their index.
        #[arg(long, default_value = "1000000")]
        count: String,
        #[arg(long, default_value_t = 2)]
        rows: usize,
        #[arg(long, default_value_t = 3)]
        cols: usize,
    },
    /// Decide total unimodularity of the constraint matrix.
    TuCheck { file: PathBuf },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}

fn line(value: serde_json::Value) -> String {
    format::one_line(&value)
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn table_huge(spec: &TableSpec) -> Result<HugeInstance, CliError> {
    Ok(build_table_instance(spec)?)
}

fn feasible(doc: &Document) -> Result<bool, CliError> {
    Ok(match doc {
        Document::Huge(inst) => huge_feasible(inst)?,
        Document::Table(spec) => {
            nfold_core::tables::margins_consistent(spec) && huge_feasible(&table_huge(spec)?)?
        }
    })
}

fn solve(doc: &Document) -> Result<SolutionDoc, CliError> {
    Ok(match doc {
        Document::Huge(inst) => match huge_optimize(inst)? {
            HugeResult::Infeasible => SolutionDoc::Infeasible,
            HugeResult::Optimal(sol) => SolutionDoc::Optimal {
                objective: sol.objective,
                presentation: sol.presentation,
            },
        },
        Document::Table(spec) => match solve_huge_table(spec)? {
            TableResult::Infeasible => SolutionDoc::Infeasible,
            TableResult::Optimal(sol) => format::table_solution_doc(spec, &sol),
        },
    })
}

#[derive(serde::Serialize)]
struct VerifyOut<'a> {
    valid: bool,
    expanded: bool,
    violations: &'a [String],
}

/// Outcome of [`verify`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Verdict {
    /// Every reason the solution is not optimal; empty when it is.
    pub violations: Vec<String>,
    /// Whether the brick-by-brick check on the expanded solution ran.
    pub expanded: bool,
}

fn verdict(violations: Vec<String>) -> Result<Verdict, CliError> {
    Ok(Verdict {
        violations,
        expanded: false,
    })
}

/// Checks that `sol` is an optimal solution of `doc`.
///
/// The explicit check runs when the instance has at most `expand_limit`
/// bricks and its expanded constraint matrix fits in memory.
pub fn verify(doc: &Document, sol: &SolutionDoc, expand_limit: u64) -> Result<Verdict, CliError> {
    let optimum = solve(doc)?;
    let (objective, presentation) = match (sol, &optimum) {
        (SolutionDoc::Infeasible, SolutionDoc::Infeasible) => return verdict(Vec::new()),
        (SolutionDoc::Infeasible, SolutionDoc::Optimal { .. }) => {
            return verdict(vec![
                "solution claims infeasible but the instance is feasible".into(),
            ])
        }
        (SolutionDoc::Optimal { .. }, SolutionDoc::Infeasible) => {
            return verdict(vec!["the instance is infeasible".into()])
        }
        (
            SolutionDoc::Optimal {
                objective,
                presentation,
            },
            SolutionDoc::Optimal { .. },
        ) => (objective, presentation),
    };
    let mut out = Vec::new();
    let mut expanded = false;
    match doc {
        Document::Huge(inst) => {
            out.extend(
                verify_compact(inst, presentation)
                    .iter()
                    .map(ToString::to_string),
            );
            if out.is_empty() {
                let cost = presentation_cost(inst, presentation);
                if &cost != objective {
                    out.push(format!(
                        "reported objective {objective} differs from the presentation cost {cost}"
                    ));
                }
            }
            let small = inst
                .total_count()
                .to_u64()
                .is_some_and(|n| n <= expand_limit);
            if out.is_empty() && small {
                let bricks = expand_compact(presentation, expand_limit)?;
                match verify_explicit(inst, &bricks) {
                    Ok(found) => {
                        expanded = true;
                        out.extend(found.iter().map(ToString::to_string));
                    }
                    Err(e) if e.is_resource_limit() => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
        Document::Table(spec) => {
            let cells = spec.rows * spec.cols;
            for (k, p) in presentation.types.iter().enumerate() {
                for (j, b) in p.bricks.iter().enumerate() {
                    if b.brick.len() != cells {
                        out.push(format!("type {k} layer {j}: expected {cells} cells"));
                    }
                }
            }
            if out.is_empty() {
                let table = TableSolution::from_presentation(spec, presentation, objective.clone());
                out.extend(
                    verify_table(spec, &table, expand_limit)
                        .iter()
                        .map(ToString::to_string),
                );
                expanded = spec
                    .total_count()
                    .to_u64()
                    .is_some_and(|n| n <= expand_limit);
            }
        }
    }
    if let SolutionDoc::Optimal {
        objective: best, ..
    } = &optimum
    {
        if out.is_empty() && objective != best {
            out.push(format!(
                "objective {objective} is not optimal; the optimum is {best}"
            ));
        }
    }
    Ok(Verdict {
        violations: out,
        expanded,
    })
}

fn execute(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Feasible { file } => {
            let doc = format::parse_instance(&read(&file)?)?;
            let yes = feasible(&doc)?;
            Ok(Outcome::ok(
                if yes { 0 } else { 1 },
                line(json!({ "feasible": yes })),
            ))
        }
        Command::Solve { file, output } => {
            let doc = format::parse_instance(&read(&file)?)?;
            let sol = solve(&doc)?;
            let code = match sol {
                SolutionDoc::Infeasible => 1,
                SolutionDoc::Optimal { .. } => 0,
            };
            let text = format::serialize_solution(&sol);
            match output {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|source| CliError::Write {
                        path: path.display().to_string(),
                        source,
                    })?;
                    Ok(Outcome::ok(code, String::new()))
                }
                None => Ok(Outcome::ok(code, text)),
            }
        }
        Command::Verify {
            file,
            solution,
            expand_limit,
        } => {
            let doc = format::parse_instance(&read(&file)?)?;
            let sol = format::parse_solution(&read(&solution)?)?;
            let verdict = verify(&doc, &sol, expand_limit)?;
            let valid = verdict.violations.is_empty();
            Ok(Outcome::ok(
                if valid { 0 } else { 1 },
                format::one_line(&VerifyOut {
                    valid,
                    expanded: verdict.expanded,
                    violations: &verdict.violations,
                }),
            ))
        }
        Command::Expand { solution, limit } => {
            let presentation = match format::parse_solution(&read(&solution)?)? {
                SolutionDoc::Infeasible => {
                    return Err(CliError::Usage(
                        "an infeasible solution has no bricks".into(),
                    ))
                }
                SolutionDoc::Optimal { presentation, .. } => presentation,
            };
            let bricks: Vec<Vec<serde_json::Value>> = expand_compact(&presentation, limit)?
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|x| serde_json::Value::Number(x.to_string().parse().expect("integer")))
                        .collect()
                })
                .collect();
            Ok(Outcome::ok(0, line(json!({ "bricks": bricks }))))
        }
        Command::Gen {
            kind,
            seed,
            types,
            count,
            rows,
            cols,
        } => {
            let count = BigInt::from_str(&count)
                .map_err(|_| CliError::Usage(format!("--count is not an integer: {count}")))?;
            let opts = gen::GenOptions {
                seed,
                types,
                count,
                rows,
                cols,
            };
            let doc = match kind {
                Kind::HugeNfold => Document::Huge(gen::gen_huge(&opts)?),
                Kind::Table3 => Document::Table(gen::gen_table(&opts)?),
            };
            Ok(Outcome::ok(0, format::serialize_instance(&doc)))
        }
        Command::TuCheck { file } => {
            let doc = format::parse_instance(&read(&file)?)?;
            let matrix = match &doc {
                Document::Huge(inst) => inst.matrix.clone(),
                Document::Table(spec) => build_bipartite_incidence(spec.rows, spec.cols),
            };
            let tu = check_total_unimodularity(&matrix)?;
            Ok(Outcome::ok(
                if tu { 0 } else { 1 },
                line(json!({ "totally_unimodular": tu })),
            ))
        }
    }
}

/// Runs the command line on `args`, where `args[0]` is the program name.
///
/// Exit codes: 0 success, 1 infeasible or failed verification, 2 bad input,
/// 3 resource limit.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(0, text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(outcome) => outcome,
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
