//! `kmss`: command-line front end for the Kac-Moody spectral sequence engine.

mod commands;
mod matrix_file;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use kmss::gcm::{DEFAULT_GROUP_CAP, DEFAULT_MAX_RANK};
use kmss::holim::Coefficients;
use kmss::sseq::DEFAULT_SAMPLES;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Poset,
    Weyl,
    Invariants,
    E2,
    Collapse,
    Poincare,
    Arith,
    SerreCompare,
    GroupCohomology,
    TitsCheck,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

/// Spectral sequence computations for Kac-Moody groups from a generalized
/// Cartan matrix file.
#[derive(Debug, Parser)]
#[command(name = "kmss", version)]
pub struct Args {
    pub command: Command,
    /// Matrix file: size on the first line, then one row per line; `#` starts a comment.
    pub matrix: PathBuf,
    #[arg(long)]
    pub prime: Option<u64>,
    /// Top degree: polynomial degree for `invariants`, total degree otherwise.
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Length bound for `weyl` and `tits-check`.
    #[arg(long)]
    pub max_length: Option<usize>,
    /// Cohomological degree bound for `serre-compare` and `group-cohomology`.
    #[arg(long, default_value_t = 3)]
    pub max_column: usize,
    /// Group enumeration cap.
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    pub cap: usize,
    /// rational, integer, mod-q, local-q, or mod-N / local-N for an explicit prime.
    #[arg(long)]
    pub coefficients: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, default_value_t = DEFAULT_MAX_RANK)]
    pub max_rank: usize,
    /// Module `Sym^m` of the reflection representation for `group-cohomology`.
    #[arg(long, default_value_t = 0)]
    pub sym_degree: usize,
}

/// Failure with its exit status and machine-readable name.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub name: String,
    pub detail: String,
}

impl Failure {
    pub fn input(name: &str, detail: impl Into<String>) -> Self {
        Failure { code: 1, name: name.to_string(), detail: detail.into() }
    }
}

impl From<kmss::Error> for Failure {
    fn from(e: kmss::Error) -> Self {
        use kmss::Error::*;
        let code = match e {
            BadPrime { .. } | CapExceeded { .. } | NotCollapsed { .. } | Overflow => 2,
            _ => 1,
        };
        Failure { code, name: e.name().to_string(), detail: e.to_string() }
    }
}

pub fn parse_coefficients(text: &str, prime: Option<u64>) -> Result<Coefficients, Failure> {
    let need_prime = || prime.ok_or_else(|| Failure::input("MissingPrime", format!("--coefficients {text} needs --prime")));
    let explicit = |rest: &str| {
        rest.parse::<u64>().map_err(|_| Failure::input("InvalidCoefficients", format!("unknown coefficients `{text}`")))
    };
    match text {
        "rational" => Ok(Coefficients::Rational),
        "integer" => Ok(Coefficients::Integer),
        "mod-q" => Ok(Coefficients::ModPrime(need_prime()?)),
        "local-q" => Ok(Coefficients::LocalAt(need_prime()?)),
        _ => {
            if let Some(rest) = text.strip_prefix("mod-") {
                Ok(Coefficients::ModPrime(explicit(rest)?))
            } else if let Some(rest) = text.strip_prefix("local-") {
                Ok(Coefficients::LocalAt(explicit(rest)?))
            } else {
                Err(Failure::input("InvalidCoefficients", format!("unknown coefficients `{text}`")))
            }
        }
    }
}

fn run(args: &Args) -> Result<String, Failure> {
    let text = std::fs::read_to_string(&args.matrix)
        .map_err(|e| Failure::input("InputError", format!("{}: {e}", args.matrix.display())))?;
    let rows = matrix_file::parse(&text).map_err(|e| Failure::input("ParseError", e.to_string()))?;
    let report = commands::dispatch(args, rows)?;
    Ok(match args.format {
        Format::Text => report::text(&report),
        Format::Structured => report::structured(&report),
    })
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&args) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}: {}", f.name, f.detail);
            ExitCode::from(f.code)
        }
    }
}
