mod commands;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "hypercover", version, about = "Hyperplane and polynomial covers of the Boolean cube")]
struct Cli {
    /// Output format. JSON is stable; tables are for reading.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build one of the explicit cover families.
    Construct {
        #[command(subcommand)]
        which: commands::Construction,
    },
    /// Check a family (or polynomial) against a (t, l)-cover requirement.
    Verify(commands::VerifyArgs),
    /// Index complexity r(S) or algebraic complexity a(S).
    Complexity(commands::ComplexityArgs),
    /// Polynomial utilities: expand a family, multiplicities, degree bounds, grid theorem.
    Polynomial {
        #[command(subcommand)]
        which: commands::PolyCommand,
    },
    /// Restricted sumset bound with a forbidden set, or the distinct-sums check.
    Sumset(commands::SumsetArgs),
    /// Common zero outside a given set of zeros of a polynomial system.
    Cw(InputArg),
    /// Grid point where a polynomial does not vanish.
    Nullsatz(InputArg),
    /// Exact minimal cover search over a catalog of hyperplane traces.
    Search(commands::SearchArgs),
}

#[derive(Args, Debug)]
struct InputArg {
    /// JSON input file.
    #[arg(long)]
    input: std::path::PathBuf,
}

/// What a command produced: a report and whether it verified.
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

impl Outcome {
    pub fn ok(report: Value) -> Self {
        Outcome { report, ok: true }
    }
}

/// Failures that still come with a report go through [`Outcome`]; these are
/// the ones that do not.
pub enum Failure {
    /// Bad flags, unreadable or malformed input, out-of-range parameters.
    Usage(String),
    /// The input violates a checked hypothesis, or a proven bound failed.
    Rejected(String),
}

impl From<hypercover::Error> for Failure {
    fn from(e: hypercover::Error) -> Self {
        use hypercover::Error::*;
        match e {
            Hypothesis(_) | BoundViolated(_) | Exhausted(_) => Failure::Rejected(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Construct { which } => commands::construct(which),
        Command::Verify(args) => commands::verify(args),
        Command::Complexity(args) => commands::complexity(args),
        Command::Polynomial { which } => commands::polynomial(which),
        Command::Sumset(args) => commands::sumset(args),
        Command::Cw(arg) => commands::cw(&arg.input),
        Command::Nullsatz(arg) => commands::nullsatz(&arg.input),
        Command::Search(args) => commands::search(args),
    };
    match result {
        Ok(outcome) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&outcome.report).expect("valid JSON") + "\n",
                Format::Table => table::render(&outcome.report),
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Rejected(msg)) => {
            eprintln!("rejected: {msg}");
            ExitCode::from(1)
        }
    }
}
