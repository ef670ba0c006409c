//! `hoqt` — a command-line front end for typed higher-order quantum maps.
//!
//! Exit codes are a stable contract:
//!
//! | code | meaning                          |
//! |------|----------------------------------|
//! | 0    | success / cone member            |
//! | 1    | cone non-member                  |
//! | 2    | type-expression parse error      |
//! | 3    | map file format error            |
//! | 4    | type or registry mismatch        |
//! | 5    | membership check inconclusive    |

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "hoqt",
    version,
    about = "Parse higher-order map types, compute parallel products, and check positivity cones"
)]
pub struct Cli {
    /// Inline system dimensions, e.g. `A=2,B=3`; overrides --config entries
    #[arg(long, global = true, value_name = "LIST")]
    pub dims: Option<String>,

    /// Registry file with one `label = dimension` entry per line
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConeArg {
    #[value(name = "K")]
    K,
    #[value(name = "H")]
    H,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Choi,
    Definitional,
}

#[derive(Subcommand)]
pub enum Command {
    /// Parse a type expression and report its canonical form, order,
    /// structure, and syntax tree
    Parse {
        /// Type expression, e.g. `(A->B)->(C->D)`
        expr: String,
    },

    /// Compute the parallel product of two types
    Partype {
        left: String,
        right: String,
        /// Print every recursion step labeled by its clause
        #[arg(long)]
        trace: bool,
        /// Also print the padded same-structure forms of the operands
        #[arg(long)]
        pad: bool,
    },

    /// Parallel product of two map files
    Parmap {
        left: PathBuf,
        right: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },

    /// Apply an arrow-typed map file to an argument map file
    Apply {
        map: PathBuf,
        input: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },

    /// Compose two map files (`outer ∘ inner`)
    Compose {
        outer: PathBuf,
        inner: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },

    /// Check cone membership of a map file
    Check {
        map: PathBuf,
        #[arg(long, value_enum)]
        cone: ConeArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Choi)]
        method: MethodArg,
        /// Spectral tolerance for membership decisions
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Sampled inputs per probe type (definitional method)
        #[arg(long, default_value_t = 16)]
        probes: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },

    /// Generate a pseudo-random cone element and write it as a map file
    Random {
        #[arg(long = "type", value_name = "EXPR")]
        ty: String,
        #[arg(long, value_enum)]
        cone: ConeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code())
        }
    }
}
