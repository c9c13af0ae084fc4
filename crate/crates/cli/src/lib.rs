//! Command-line driver for the `translen` tools.
//!
//! [`run`] parses an argument vector, executes one subcommand, writes its
//! report to a file or stdout, and returns the process exit code:
//! 0 on success, 1 when a certificate or property check fails, 2 on
//! malformed input.

mod commands;
pub mod sweep_csv;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "translen", version, about = "Exact bounds on pseudo-Anosov translation lengths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Penner block matrices and vanishing certificates.
    #[command(subcommand)]
    Penner(PennerCommand),
    /// Symmetric-function identities and bounded reciprocal polynomials.
    #[command(subcommand)]
    Symfun(SymfunCommand),
    /// Twist words acting on homology.
    #[command(subcommand)]
    Homology(HomologyCommand),
    /// Closed-form translation length bounds.
    #[command(subcommand)]
    Bounds(BoundsCommand),
}

#[derive(Subcommand, Debug)]
pub enum PennerCommand {
    /// Certify one Penner spec (default: all-ones blocks, r = 1, m = 6).
    Certify(CertifyArgs),
    /// Certify a range of m and emit a bounds CSV.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Block size; taken from --config when omitted there, else 1.
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long = "m-min")]
    pub m_min: usize,
    #[arg(long = "m-max")]
    pub m_max: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Spec template whose blocks, chi and surface models are reused at every m.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "alpha-c", default_value_t = 1)]
    pub alpha_c: u64,
    /// Worker threads; 0 uses every available execution unit.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Subcommand, Debug)]
pub enum SymfunCommand {
    /// Check Newton's identities on seeded random integer multisets.
    NewtonCheck(NewtonArgs),
    /// Enumerate reciprocal polynomials with bounded power sums.
    Enumerate(EnumerateArgs),
}

#[derive(Args, Debug)]
pub struct NewtonArgs {
    #[arg(long)]
    pub degree: usize,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Multiset entries are drawn from [-max-entry, max-entry].
    #[arg(long = "max-entry", default_value_t = 5)]
    pub max_entry: i64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub degree: usize,
    #[arg(long)]
    pub delta: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Subcommand, Debug)]
pub enum HomologyCommand {
    /// Lefschetz number of a twist word.
    Lefschetz(LefschetzArgs),
    /// First iterate whose trace exceeds 2, or a periodicity certificate.
    Escape(EscapeArgs),
}

#[derive(Args, Debug)]
pub struct LefschetzArgs {
    #[arg(long)]
    pub genus: usize,
    /// Twist word JSON file.
    #[arg(long, required_unless_present = "psi", conflicts_with = "psi")]
    pub word: Option<PathBuf>,
    /// Use the alternating chain preset with this many punctures.
    #[arg(long)]
    pub psi: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EscapeArgs {
    /// Matrix JSON file.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Iterate cap; defaults to 4g^2 + 2 for a 2g x 2g matrix.
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCommand {
    /// Lower and upper bounds for one signature.
    Report(ReportArgs),
    /// Log-log least-squares fit of two columns of a sweep CSV.
    Fit(FitArgs),
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long)]
    pub genus: u64,
    #[arg(long)]
    pub punctures: u64,
    #[arg(long = "alpha-c")]
    pub alpha_c: u64,
    /// Penner spec template for the upper bound (default: all-ones, r = 1).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Column used as x; `chi` is fitted by absolute value.
    #[arg(long, default_value = "m")]
    pub x: String,
    #[arg(long, default_value = "upper_penner")]
    pub y: String,
}

/// Error classified by exit code.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Failure(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) | CliError::Failure(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<translen_core::Error> for CliError {
    fn from(e: translen_core::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Failure(e.to_string())
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }
}

/// Parses `argv` (including the program name) and runs it, writing reports
/// to stdout and diagnostics to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match commands::dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
