//! `butterfly`: checkers, exact sums, cyclic audits and extremal search for
//! families of subsets avoiding `A ∪ B ⊆ C ∩ D`.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use butterfly_core::Predicate;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::BudgetArg;
use crate::report::Status;

#[derive(Debug, Parser)]
#[command(name = "butterfly", version, about)]
struct Cli {
    /// Emit the report as JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test a family for a condition; exit 1 with a witness if it fails.
    Check {
        /// Family file, `-` for stdin, or a fixture such as `two-levels:4:2`.
        input: String,
        #[arg(long, value_enum, default_value_t = Condition::Star)]
        condition: Condition,
    },
    /// Exact weighted sum Σ 1/C(n,|F|).
    Lym {
        input: String,
        /// Also check the bound Σ <= 2 and its hypotheses.
        #[arg(long, alias = "bound")]
        theorem2: bool,
    },
    /// Cyclic-arrangement double count, or the exhaustive interval-family sweep.
    Audit(AuditArgs),
    /// Exact maximum family by branch and bound.
    Search {
        n: usize,
        /// `star` or `fork-free`.
        predicate: Predicate,
        /// Also list every maximum family up to relabeling.
        #[arg(long)]
        enumerate: bool,
        /// Node count (`500000`) or wall time (`30s`, `250ms`).
        #[arg(long)]
        budget: Option<BudgetArg>,
        /// Worker threads; 0 picks one per core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Write the instance as DIMACS CNF.
        #[arg(long, value_name = "PATH")]
        export_cnf: Option<PathBuf>,
    },
    /// Seeded random property suites.
    Proptest {
        n: usize,
        #[arg(long, default_value_t = 1000)]
        cases: u64,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct AuditArgs {
    input: Option<String>,
    /// Sweep every family of proper intervals along one arrangement of [n] (n <= 4).
    #[arg(long, value_name = "N")]
    all_intervals: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Condition {
    Star,
    Fork,
    Antichain,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Check { input, condition } => commands::check::run(input, *condition),
        Command::Lym { input, theorem2 } => commands::lym::run(input, *theorem2),
        Command::Audit(args) => commands::audit::run(args.input.as_deref(), args.all_intervals),
        Command::Search {
            n,
            predicate,
            enumerate,
            budget,
            threads,
            export_cnf,
        } => commands::search::run(commands::search::SearchArgs {
            n: *n,
            predicate: *predicate,
            enumerate: *enumerate,
            budget: *budget,
            threads: *threads,
            export_cnf: export_cnf.clone(),
        }),
        Command::Proptest { n, cases } => {
            commands::proptest::run(*n, *cases, cli.seed.unwrap_or(0))
        }
    };
    match outcome {
        Ok(mut outcome) => {
            outcome.report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
            if cli.json {
                println!("{}", outcome.report.to_json());
            } else {
                print!("{}", outcome.text);
            }
            outcome.report.status.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            Status::InputError.exit_code()
        }
    }
}
