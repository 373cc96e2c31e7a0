//! `cfmul`: expand surds, evaluate periodic continued fractions, sweep the
//! collapse theorems, dump polynomial families and check root loci.
//!
//! Exit status is 0 when every check passes, 1 on a mathematical mismatch or
//! numeric failure, and 2 on a usage error.

mod commands;
mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use cfmul::DEFAULT_MAX_STEPS;
use output::Format;

#[derive(Parser, Debug)]
#[command(name = "cfmul", version, about = "Continued fractions of quadratic surds and their integer multiples")]
pub struct Cli {
    /// Machine-readable output; plain text when omitted.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write records here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,
    /// Step budget for each expansion.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: usize,
    /// Residual tolerance for locus checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Continued fraction of (P+√D)/Q or of the larger root of ax²+bx+c.
    Expand(ExpandArgs),
    /// Exact value of [pre; (period)]; zeros inside a word are collapsed.
    Value(ValueArgs),
    /// Check predicted against computed expansions over a parameter grid.
    Verify(VerifyArgs),
    /// Coefficients of a polynomial family, constant term first.
    Poly(PolyArgs),
    /// Roots of a polynomial family measured against its claimed locus.
    Locus(LocusArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct ExpandArgs {
    #[arg(long, num_args = 3, value_names = ["P", "Q", "D"], allow_negative_numbers = true)]
    pub surd: Option<Vec<String>>,
    #[arg(long, num_args = 3, value_names = ["A", "B", "C"], allow_negative_numbers = true)]
    pub quadratic: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct ValueArgs {
    /// Comma-separated preperiod.
    #[arg(long, allow_hyphen_values = true, value_name = "LIST")]
    pub pre: Option<String>,
    /// Comma-separated period.
    #[arg(long, allow_hyphen_values = true, value_name = "LIST")]
    pub period: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Alpha,
    Lambda,
    Beta,
    Mu,
    G,
}

/// Ranges are `a..b` (inclusive), `a..=b` or a single integer.
#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub family: FamilyArg,
    #[arg(long = "n", value_name = "RANGE")]
    pub n: Option<String>,
    #[arg(long = "N", value_name = "RANGE")]
    pub big_n: Option<String>,
    #[arg(long = "k", value_name = "RANGE")]
    pub k: Option<String>,
    #[arg(long = "x", value_name = "RANGE")]
    pub x: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolyKind {
    /// Convergent denominators q_1..q_count of [overline N, x^(k)].
    Family,
    /// Q_n of the shifted family.
    Shifted,
    /// g_k(N, x).
    Gpoly,
}

#[derive(Args, Debug)]
pub struct PolyArgs {
    #[arg(value_enum)]
    pub kind: PolyKind,
    #[arg(long = "k")]
    pub k: Option<i64>,
    #[arg(long = "N")]
    pub big_n: Option<i64>,
    #[arg(long = "n")]
    pub n: Option<i64>,
    #[arg(long)]
    pub count: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CurveArg {
    H1,
    Chebk1,
    #[value(name = "quartic-k4")]
    QuarticK4,
}

#[derive(Args, Debug)]
pub struct LocusArgs {
    #[arg(value_enum)]
    pub curve: CurveArg,
    #[arg(long = "n")]
    pub n: Option<i64>,
    #[arg(long = "N")]
    pub big_n: Option<i64>,
    /// Comma-separated family indices for the quartic trend.
    #[arg(long = "m", value_name = "LIST", default_value = "6,12")]
    pub m: String,
}

/// Parses `args`, runs the command and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let target: &mut dyn Write = if informational { stdout } else { stderr };
            let _ = write!(target, "{}", e.render());
            return if informational { 0 } else { 2 };
        }
    };
    if cli.tolerance.is_nan() || cli.tolerance <= 0.0 {
        let _ = writeln!(stderr, "error: --tolerance must be positive");
        return 2;
    }
    if cli.max_steps == 0 {
        let _ = writeln!(stderr, "error: --max-steps must be at least 1");
        return 2;
    }
    match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => {
                let mut w = BufWriter::new(f);
                let code = commands::dispatch(&cli, &mut w, stderr);
                if let Err(e) = w.flush() {
                    let _ = writeln!(stderr, "error: writing {}: {e}", path.display());
                    return 1;
                }
                code
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot create {}: {e}", path.display());
                2
            }
        },
        None => {
            let code = commands::dispatch(&cli, stdout, stderr);
            let _ = stdout.flush();
            code
        }
    }
}

fn main() -> ExitCode {
    let mut stdout = BufWriter::new(io::stdout().lock());
    let mut stderr = io::stderr();
    ExitCode::from(run(std::env::args_os(), &mut stdout, &mut stderr))
}
