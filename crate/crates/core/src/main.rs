use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hocard::checker::{self, CheckReport, GenConfig, Suite, SuiteSummary};
use hocard::dsl::{evaluate, Answer, Diagnostic, EvalError, QueryResult};
use hocard::Budget;

const USAGE: u8 = 1;
const EVAL: u8 = 2;
const THEOREM: u8 = 3;
const RESOURCE: u8 = 4;

#[derive(Parser)]
#[command(name = "hocard", version, about = "Homotopy cardinality, entropy and diversity of finite groupoids")]
struct Cli {
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BudgetArgs {
    /// Largest explicit groupoid, in objects.
    #[arg(long, global = true, default_value_t = Budget::default().max_objects)]
    max_objects: usize,
    /// Largest number of candidates any enumeration may visit.
    #[arg(long, global = true, default_value_t = Budget::default().max_candidates)]
    max_candidates: u64,
    /// Largest group the evaluator will build.
    #[arg(long, global = true, default_value_t = Budget::default().max_group_order)]
    max_group_order: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Theorems,
    Conjectures,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a `.hott` file.
    Eval {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the identity ledger on generated instances and the curated fixtures.
    Check {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = GenConfig::default().trials)]
        trials: usize,
        #[arg(long, default_value_t = GenConfig::default().seed)]
        seed: u64,
        /// Largest group order the generator draws.
        #[arg(long, default_value_t = GenConfig::default().max_group_order)]
        max_order: usize,
        #[arg(long, default_value_t = GenConfig::default().max_components)]
        max_components: usize,
        #[arg(long, default_value_t = GenConfig::default().max_fiber_objects)]
        max_fiber_objects: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Cardinality of a groupoid or family expression.
    Card {
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
    /// Entropy and diversity of a probability groupoid or random variable.
    Entropy {
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
}

#[derive(Serialize)]
struct Document<'a> {
    queries: &'a [QueryResult],
    reports: &'a [CheckReport],
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<&'a SuiteSummary>,
}

fn print_diagnostic(origin: &str, d: &Diagnostic) {
    eprintln!("{origin}:{d}");
    if !d.expected.is_empty() {
        eprintln!("  expected one of: {}", d.expected.join(", "));
    }
}

fn eval_error_code(e: &EvalError) -> u8 {
    if e.resource {
        RESOURCE
    } else {
        EVAL
    }
}

fn check_reports(results: &[QueryResult]) -> Vec<CheckReport> {
    results
        .iter()
        .filter_map(|r| match &r.answer {
            Answer::Check(c) => Some(c.clone()),
            _ => None,
        })
        .collect()
}

fn exit_for(reports: &[CheckReport]) -> u8 {
    if reports.iter().any(CheckReport::is_theorem_violation) {
        THEOREM
    } else {
        0
    }
}

fn print_json(doc: &Document) {
    println!("{}", serde_json::to_string_pretty(doc).expect("reports serialize"));
}

fn eval_file(file: &Path, format: Format, budget: &Budget) -> u8 {
    let src = match std::fs::read(file) {
        Ok(bytes) => bytes,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return USAGE;
        }
    };
    let origin = file.display().to_string();
    let src = match String::from_utf8(src) {
        Ok(s) => s,
        Err(e) => {
            if let Err(d) = hocard::dsl::parse_bytes(e.as_bytes()) {
                print_diagnostic(&origin, &d);
            }
            return USAGE;
        }
    };
    let base_dir = file.parent().unwrap_or(Path::new("."));
    let results = match evaluate(&src, budget, base_dir) {
        Err(d) => {
            print_diagnostic(&origin, &d);
            return USAGE;
        }
        Ok(Err(e)) => {
            eprintln!("{origin}:{e}");
            return eval_error_code(&e);
        }
        Ok(Ok(results)) => results,
    };
    let reports = check_reports(&results);
    match format {
        Format::Json => print_json(&Document {
            queries: &results,
            reports: &reports,
            summary: None,
        }),
        Format::Text => {
            let width = results.iter().map(|r| r.query.chars().count()).max().unwrap_or(0);
            for r in &results {
                println!("{:>4}  {:<width$}  {}", r.line, r.query, r.answer);
            }
        }
    }
    exit_for(&reports)
}

/// Evaluates `wrapper(expr)` and prints the single answer.
fn one_query(wrapper: &str, expr: &str, budget: &Budget) -> u8 {
    let src = format!("{wrapper}({expr});");
    match evaluate(&src, budget, Path::new(".")) {
        Err(mut d) => {
            if d.line == 1 {
                d.column = d.column.saturating_sub(wrapper.len() + 1).max(1);
            }
            print_diagnostic("expression", &d);
            USAGE
        }
        Ok(Err(mut e)) => {
            if e.line == 1 {
                e.column = e.column.saturating_sub(wrapper.len() + 1).max(1);
            }
            eprintln!("expression:{e}");
            eval_error_code(&e)
        }
        Ok(Ok(results)) => {
            for r in &results {
                println!("{}", r.answer);
            }
            0
        }
    }
}

fn run_check(suite: Suite, config: GenConfig, format: Format, budget: &Budget) -> u8 {
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return USAGE;
    }
    let mut reports = match checker::run_suite(&config, suite, budget) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EVAL;
        }
    };
    let generated = reports.len();
    if suite.has_fixtures() {
        match checker::run_fixtures(budget) {
            Ok(r) => reports.extend(r),
            Err(e) => {
                eprintln!("error: fixture {e}");
                return EVAL;
            }
        }
    }
    let summary = SuiteSummary::new(&reports);
    match format {
        Format::Json => print_json(&Document {
            queries: &[],
            reports: &reports,
            summary: Some(&summary),
        }),
        Format::Text => {
            println!(
                "seed {}, {} trials, group order <= {}: {} generated reports, {} curated",
                config.seed,
                config.trials,
                config.max_group_order,
                generated,
                reports.len() - generated
            );
            print!("{summary}");
            let notable: Vec<&CheckReport> = reports
                .iter()
                .enumerate()
                .filter(|(i, r)| *i >= generated || r.is_theorem_violation())
                .map(|(_, r)| r)
                .collect();
            if !notable.is_empty() {
                println!();
                let width = notable.iter().map(|r| r.id.name().len()).max().unwrap_or(0);
                for r in notable {
                    let side = |v: &Option<checker::ExactValue>| v.as_ref().map_or("-".to_string(), |v| v.to_string());
                    println!(
                        "{:<9} {:<width$}  lhs = {}, rhs = {}",
                        r.verdict.to_string(),
                        r.id.name(),
                        side(&r.lhs),
                        side(&r.rhs)
                    );
                    println!("{:<9} {}", "", r.instance_dsl);
                }
            }
        }
    }
    let failures = summary.theorem_failures();
    if failures > 0 {
        eprintln!("error: {failures} theorem identities failed");
        return THEOREM;
    }
    0
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let budget = Budget {
        max_objects: cli.budget.max_objects,
        max_candidates: cli.budget.max_candidates,
        max_group_order: cli.budget.max_group_order,
    };
    let code = match cli.command {
        Command::Eval { file, format } => eval_file(&file, format, &budget),
        Command::Card { expr } => one_query("card", &expr, &budget),
        Command::Entropy { expr } => one_query("entropy", &expr, &budget),
        Command::Check {
            suite,
            trials,
            seed,
            max_order,
            max_components,
            max_fiber_objects,
            format,
        } => {
            let suite = match suite {
                SuiteArg::Theorems => Suite::Theorems,
                SuiteArg::Conjectures => Suite::Conjectures,
                SuiteArg::All => Suite::All,
            };
            let config = GenConfig {
                seed,
                trials,
                max_group_order: max_order,
                max_components,
                max_fiber_objects,
            };
            run_check(suite, config, format, &budget)
        }
    };
    ExitCode::from(code)
}
