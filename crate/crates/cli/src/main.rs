mod commands;
mod output;
mod sweep;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

/// Constants, near-extremal constructions and numerical estimates for the
/// Sendov radius near the unit circle.
#[derive(Debug, Parser)]
#[command(name = "sendovlab", version)]
struct Cli {
    /// Output format; defaults to text, or csv for `sweep`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the expansion constants for expansion indices `n >= 3`.
    Constants {
        /// Index or range, e.g. `5`, `3..7`, `3..=7` or `3,5,9`.
        #[arg(long, value_parser = parse_range)]
        n: IndexList,
    },
    /// Run a named suite of checks; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Build a near-extremal polynomial and report its critical points.
    Construct {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Expansion index (degree of P'); the real family needs it, the
        /// sextic accepts only 5.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        beta: f64,
    },
    /// Estimate r_n(beta) by multistart local search.
    Estimate {
        /// Polynomial degree.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        search: SearchArgs,
        /// Restrict to polynomials with real coefficients.
        #[arg(long)]
        real_only: bool,
    },
    /// Append estimates over a grid of degrees and `t = 1 - beta` to a CSV
    /// file, skipping cells already present.
    Sweep(sweep::SweepArgs),
    /// Fit `c0 + c1 t + c2 t^2` to one degree's rows of a sweep file.
    Fit(sweep::FitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Prop6,
    Prop7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Lemma8,
    TIdentities,
    Corollaries,
    Scaling,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, default_value_t = sendovlab::estimate::DEFAULT_STARTS)]
    starts: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Largest expansion index for lemma8 and t-identities.
    #[arg(long, default_value_t = 200)]
    max_n: usize,
    /// beta for the corollaries suite.
    #[arg(long, default_value_t = 0.99)]
    beta: f64,
    /// Family for the scaling suite.
    #[arg(long, value_enum, default_value = "prop7")]
    family: FamilyArg,
    /// Real-family indices for the scaling suite.
    #[arg(long, value_parser = parse_range, default_value = "3,4,6,7,8")]
    indices: IndexList,
    #[command(flatten)]
    search: SearchArgs,
    /// List every check in text mode, not only failures.
    #[arg(long)]
    all: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexList(pub Vec<usize>);

/// Parses `5`, `3..7` (inclusive), `3..=7` or a comma list of those.
pub fn parse_range(s: &str) -> Result<IndexList, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let lo: usize = a.trim().parse().map_err(|_| format!("bad range start in {part:?}"))?;
            let hi: usize = b.trim().parse().map_err(|_| format!("bad range end in {part:?}"))?;
            if hi < lo {
                return Err(format!("empty range {part:?}"));
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| format!("not an integer: {part:?}"))?);
        }
    }
    Ok(IndexList(out))
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    ChecksFailed(usize),
    NoConvergence(String),
    Io(std::io::Error),
    Core(sendovlab::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::ChecksFailed(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::NoConvergence(_) => 3,
            CliError::Core(e) => match e {
                sendovlab::Error::NoConvergence { .. } | sendovlab::Error::ContractionFailed(_) => 3,
                _ => 2,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::ChecksFailed(k) => write!(f, "{k} check(s) failed"),
            CliError::NoConvergence(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<sendovlab::Error> for CliError {
    fn from(e: sendovlab::Error) -> Self {
        CliError::Core(e)
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SENDOVLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("SENDOVLAB_THREADS must be an integer, got {raw:?}")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    let out = cli.out.as_deref();
    let format = cli.format;
    match cli.command {
        Command::Constants { n } => commands::constants(&n.0, format.unwrap_or(Format::Text), out),
        Command::Verify(args) => commands::verify(&args, format.unwrap_or(Format::Text), out),
        Command::Construct { family, n, beta } => {
            commands::construct(family, n, beta, format.unwrap_or(Format::Text), out)
        }
        Command::Estimate {
            n,
            beta,
            search,
            real_only,
        } => commands::estimate(n, beta, &search, real_only, format.unwrap_or(Format::Text), out),
        Command::Sweep(args) => {
            if format.is_some_and(|f| f != Format::Csv) {
                return Err(CliError::Usage("sweep writes CSV only".into()));
            }
            sweep::sweep(&args, out)
        }
        Command::Fit(args) => sweep::fit(&args, format.unwrap_or(Format::Text), out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sendovlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("5").unwrap().0, vec![5]);
        assert_eq!(parse_range("3..6").unwrap().0, vec![3, 4, 5, 6]);
        assert_eq!(parse_range("3..=4,9").unwrap().0, vec![3, 4, 9]);
        assert!(parse_range("6..3").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::ChecksFailed(2).exit_code(), 1);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::NoConvergence("x".into()).exit_code(), 3);
        let stalled = sendovlab::Error::NoConvergence {
            iterations: 1,
            worst_residual: 1.0,
            best: Vec::new(),
        };
        assert_eq!(CliError::Core(stalled).exit_code(), 3);
        assert_eq!(CliError::Core(sendovlab::Error::ZeroLeading).exit_code(), 2);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
