//! Resumable CSV sweeps and expansion fits over their rows.

use std::collections::HashSet;
use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use sendovlab::estimate::{estimate_radius, fit_expansion, quadratic_approx, FIT_MAX_T};
use sendovlab::verify::constructed_lower_bound;

use crate::output::{emit_record, round_sig, sink, to_value, Format, MACHINE_DIGITS};
use crate::{parse_range, CliError, IndexList, SearchArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Multistart search over the disk.
    Estimate,
    /// Larger of the contracted near-extremal constructions (degree >= 4).
    Construct,
    /// The two-term expansion (degree >= 4).
    Quadratic,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Polynomial degrees, e.g. `4..7`.
    #[arg(long, value_parser = parse_range)]
    n: IndexList,
    /// Values of `t = 1 - beta`, each in (0, 0.2].
    #[arg(long, value_delimiter = ',', required = true)]
    t: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_enum, default_value = "estimate")]
    methods: Vec<Method>,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Sweep file to read.
    #[arg(long)]
    input: PathBuf,
    /// Polynomial degree whose rows are fitted.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "estimate")]
    method: Method,
}

/// One line of a sweep file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub n: usize,
    pub beta: f64,
    pub value: f64,
    pub method: Method,
    pub starts: usize,
    pub seed: u64,
    pub converged: bool,
}

const HEADER: [&str; 7] = ["n", "beta", "value", "method", "starts", "seed", "converged"];

type Key = (usize, u64, Method);

fn key(n: usize, beta: f64, method: Method) -> Key {
    (n, round_sig(beta, MACHINE_DIGITS).to_bits(), method)
}

fn read_rows(path: &Path) -> Result<Vec<Row>, CliError> {
    let mut rd = csv::Reader::from_path(path)?;
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    if header != HEADER {
        return Err(CliError::Usage(format!(
            "{} does not look like a sweep file (header {header:?})",
            path.display()
        )));
    }
    rd.deserialize().map(|r| r.map_err(CliError::from)).collect()
}

fn compute(n: usize, beta: f64, method: Method, search: &SearchArgs) -> Result<Option<Row>, CliError> {
    let row = |value: f64, starts: usize, seed: u64, converged: bool| Row {
        n,
        beta: round_sig(beta, MACHINE_DIGITS),
        value: round_sig(value, MACHINE_DIGITS),
        method,
        starts,
        seed,
        converged,
    };
    Ok(match method {
        Method::Estimate => {
            let e = estimate_radius(n, beta, search.starts, search.seed, false)?;
            Some(row(e.value, e.starts, e.seed, e.converged))
        }
        Method::Construct | Method::Quadratic if n < 4 => {
            log::warn!("method {method:?} needs degree >= 4; skipping n={n}");
            None
        }
        Method::Construct => Some(row(constructed_lower_bound(n, beta)?, 0, 0, true)),
        Method::Quadratic => Some(row(quadratic_approx(n, beta)?, 0, 0, true)),
    })
}

/// Appends one row per missing `(n, t, method)` cell, in `(n, t)` order.
/// Each row is flushed as soon as it is computed, so an interrupted sweep
/// keeps its finished cells and a rerun fills in the rest.
pub fn sweep(args: &SweepArgs, out: Option<&Path>) -> Result<(), CliError> {
    if let Some(t) = args.t.iter().find(|t| !(**t > 0.0 && **t <= 0.2)) {
        return Err(CliError::Usage(format!("t = {t} outside (0, 0.2]")));
    }
    if let Some(n) = args.n.0.iter().find(|&&n| n < 2) {
        return Err(CliError::Usage(format!("degree must be at least 2, got {n}")));
    }
    let mut ts = args.t.clone();
    ts.sort_by(|a, b| b.total_cmp(a));
    ts.dedup();
    let mut ns = args.n.0.clone();
    ns.sort_unstable();
    ns.dedup();

    let existing = match out {
        Some(p) if p.exists() && std::fs::metadata(p)?.len() > 0 => read_rows(p)?,
        _ => Vec::new(),
    };
    let done: HashSet<Key> = existing.iter().map(|r| key(r.n, r.beta, r.method)).collect();

    let mut w: Box<dyn Write> = match out {
        Some(p) => Box::new(OpenOptions::new().create(true).append(true).open(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut cw = csv::WriterBuilder::new().has_headers(false).from_writer(&mut w);
    if existing.is_empty() {
        cw.write_record(HEADER)?;
        cw.flush()?;
    }
    let mut added = 0;
    for &n in &ns {
        for &t in &ts {
            let beta = 1.0 - t;
            for &method in &args.methods {
                if done.contains(&key(n, beta, method)) {
                    continue;
                }
                if let Some(row) = compute(n, beta, method, &args.search)? {
                    cw.serialize(&row)?;
                    cw.flush()?;
                    added += 1;
                }
            }
        }
    }
    log::info!("sweep added {added} rows");
    Ok(())
}

pub fn fit(args: &FitArgs, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let rows = read_rows(&args.input)?;
    let mut samples: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n == args.n && r.method == args.method)
        .map(|r| (r.beta, r.value))
        .collect();
    let before = samples.len();
    samples.retain(|&(b, _)| 1.0 - b <= FIT_MAX_T);
    if samples.len() < before {
        log::warn!("ignored {} rows with t > {FIT_MAX_T}", before - samples.len());
    }
    let fit = fit_expansion(args.n, &samples)?;
    let mut v = to_value(&fit);
    v["method"] = to_value(&args.method);
    if args.n >= 4 {
        let c = sendovlab::constants::compute_constants(args.n - 1)?;
        v["expected"] = json!({"slope": c.slope, "curvature": c.curvature, "d": c.d});
    }
    let mut w = sink(out)?;
    emit_record(v, format, &mut w)?;
    Ok(())
}
