use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use tapp::TappError;
use tapp_cli::case::CaseSpec;
use tapp_cli::check::{check_case, run_engine};
use tapp_cli::gen::{generate, CATEGORY_COUNT};
use tapp_cli::run::{error_document, run_document};
use tapp_cli::suite::run_suite;

/// Tensor contraction conformance tool.
#[derive(Parser)]
#[command(name = "tapp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a case file and print D and the status as JSON.
    Run {
        /// Case file, or `-` for stdin.
        path: PathBuf,
    },
    /// Print a generated case for a category.
    Gen {
        #[arg(long = "case", value_parser = clap::value_parser!(u32).range(1..=CATEGORY_COUNT as i64))]
        category: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare engine and oracle on a case file.
    Check {
        path: PathBuf,
        /// Relative tolerance; defaults to 1e-12, or 1e-4 if any operand is 32-bit.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Shift every expected value by this fraction of max(|v|, 1).
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
    },
    /// Run the generated conformance suite.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        iterations: u64,
        /// Restrict to a single category.
        #[arg(long = "case", value_parser = clap::value_parser!(u32).range(1..=CATEGORY_COUNT as i64))]
        category: Option<u32>,
    },
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code.clamp(0, 255) as u8)
}

fn fail(err: &TappError) -> ExitCode {
    eprintln!(
        "{}",
        serde_json::to_string(&error_document(err.code(), err.to_string())).expect("serializable")
    );
    exit(err.code().as_i32())
}

fn load(path: &PathBuf) -> Result<CaseSpec, TappError> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| TappError::Parse(format!("{}: {e}", path.display())))?;
    CaseSpec::from_json(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { path } => {
            let case = match load(&path).and_then(|s| s.materialize()) {
                Ok(case) => case,
                Err(e) => return fail(&e),
            };
            match run_engine(&case) {
                Ok(run) => {
                    print_json(&run_document(&case, &run));
                    ExitCode::SUCCESS
                }
                Err(code) => {
                    eprintln!(
                        "{}",
                        serde_json::to_string(&error_document(code, code.description())).expect("serializable")
                    );
                    exit(code.as_i32())
                }
            }
        }
        Command::Gen { category, seed } => {
            println!("{}", generate(category, seed).to_json());
            ExitCode::SUCCESS
        }
        Command::Check {
            path,
            tolerance,
            perturb,
        } => {
            let case = match load(&path).and_then(|s| s.materialize()) {
                Ok(case) => case,
                Err(e) => return fail(&e),
            };
            let tolerance = tolerance.unwrap_or_else(|| case.default_tolerance());
            let outcome = check_case(&case, tolerance, perturb);
            print_json(&outcome);
            exit(outcome.exit_code())
        }
        Command::Suite {
            seed,
            iterations,
            category,
        } => {
            let report = run_suite(seed, iterations, category);
            print_json(&report);
            exit(report.exit_code())
        }
    }
}
