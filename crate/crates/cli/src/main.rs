mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayleigh::Order;

/// Bessel zeros, Rayleigh sums, and the relaxation functions built on them.
#[derive(Debug, Parser)]
#[command(name = "rayleigh", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Positive zeros j_{nu,n} of J_nu.
    Zeros(CountArgs),
    /// Sum of 1/j^2 with tail correction, against 1/(4(nu+1)).
    Sum(CountArgs),
    /// Finite-N readings of the convergence abscissae d and sigma.
    Diagnose(CountArgs),
    /// F, G and Phi on a time grid.
    Relax(GridArgs),
    /// Series against the Gaver-Stehfest inversion of the Laplace image.
    InvertCheck(InvertArgs),
    /// Current I for a voltage trace read as CSV (t, V).
    Respond(RespondArgs),
    /// Exponential-sum weights (c_n, alpha_n).
    Prony(SeriesArgs),
    /// Run the acceptance checks and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    /// Bessel order, nu > -1.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_order)]
    nu: Order,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[command(flatten)]
    common: Common,
    /// Number of zeros.
    #[arg(long)]
    count: Option<usize>,
}

#[derive(Debug, Args)]
struct SeriesArgs {
    #[command(flatten)]
    common: Common,
    /// Bound on the neglected amplitudes.
    #[arg(long, default_value_t = 1e-4)]
    tail_tol: f64,
}

#[derive(Debug, Args)]
struct Grid {
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Log-spaced times instead of equally spaced.
    #[arg(long)]
    geometric: bool,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    series: SeriesArgs,
    #[command(flatten)]
    grid: Grid,
}

#[derive(Debug, Args)]
struct InvertArgs {
    #[command(flatten)]
    series: SeriesArgs,
    #[command(flatten)]
    grid: Grid,
    /// Gaver-Stehfest term count M (even, 4..=20).
    #[arg(long, default_value_t = 16)]
    gs_terms: usize,
}

#[derive(Debug, Args)]
struct RespondArgs {
    #[command(flatten)]
    series: SeriesArgs,
    /// Input CSV with columns t, V; stdin when absent.
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_order(s: &str) -> Result<Order, String> {
    let nu: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    Order::new(nu).map_err(|e| e.to_string())
}

/// Failure classes and their exit codes.
#[derive(Debug)]
enum Failure {
    /// Domain or validation error, exit 1.
    Invalid(String),
    /// Resource or I/O error, exit 2.
    Resource(String),
}

impl From<rayleigh::Error> for Failure {
    fn from(e: rayleigh::Error) -> Self {
        if e.is_resource() {
            Failure::Resource(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Resource(format!("i/o error: {e}"))
    }
}

/// Rendered payload plus whether the command's own checks passed.
struct Report {
    bytes: Vec<u8>,
    ok: bool,
}

fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<Report, Failure> {
    let (out, report) = match command {
        Command::Zeros(a) => (a.common.out.clone(), commands::zeros(&a)?),
        Command::Sum(a) => (a.common.out.clone(), commands::sum(&a)?),
        Command::Diagnose(a) => (a.common.out.clone(), commands::diagnose(&a)?),
        Command::Relax(a) => (a.series.common.out.clone(), commands::relax(&a)?),
        Command::InvertCheck(a) => (a.series.common.out.clone(), commands::invert_check(&a)?),
        Command::Respond(a) => (a.series.common.out.clone(), commands::respond(&a)?),
        Command::Prony(a) => (a.common.out.clone(), commands::prony(&a)?),
        Command::Verify(a) => (a.out.clone(), commands::verify(&a)),
    };
    emit(out.as_ref(), &report.bytes)?;
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(r) if r.ok => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
