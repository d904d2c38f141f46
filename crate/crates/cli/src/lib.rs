//! Command-line front end for `aflt-core`.
//!
//! Every subcommand emits JSON (default), CSV or plain text. Exit codes:
//! 0 holds / not applicable / report written, 1 criterion fails,
//! 2 inconclusive, 64 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod render;

pub use commands::{coefficient_radical, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Param,
    Brute,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "aflt", version, about = "S-unit criteria for generalized Fermat equations over imaginary quadratic fields")]
pub struct Cli {
    /// Output format [default: csv for scan, json otherwise]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for `scan` [default: available parallelism]
    #[arg(long, global = true, env = "AFLT_JOBS", value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Bounds {
    /// Largest exponent r in the parametrized families.
    #[arg(long = "rmax", default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..=125))]
    pub r_max: u32,
    /// Largest exponent of q in the parametrized families.
    #[arg(long = "smax", default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    pub s_max: u32,
    /// Largest |v| accepted in the families with q.
    #[arg(long = "vmax", default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub v_max: u64,
    /// Coordinate bound of the brute-force box.
    #[arg(long = "coord-bound", default_value_t = 1000, value_parser = clap::value_parser!(i64).range(1..=1_000_000))]
    pub coord_bound: i64,
}

#[derive(Debug, Clone, Args)]
#[allow(non_snake_case)]
pub struct RadicalArgs {
    /// Odd part of Rad(ABC); conflicts with --A/--B/--C.
    #[arg(long, conflicts_with_all = ["A", "B", "C"])]
    pub radical: Option<u64>,
    /// Coefficient A (reduced to its odd radical).
    #[arg(long = "A", allow_hyphen_values = true)]
    pub A: Option<String>,
    #[arg(long = "B", allow_hyphen_values = true)]
    pub B: Option<String>,
    #[arg(long = "C", allow_hyphen_values = true)]
    pub C: Option<String>,
    /// An extra odd prime added to S.
    #[arg(long)]
    pub q: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the criterion for Q(sqrt(-d)) and the given coefficients.
    Check {
        #[arg(long)]
        d: u64,
        #[command(flatten)]
        radical: RadicalArgs,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// List S-unit solutions by parametrization and/or brute force.
    Sunit {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        #[command(flatten)]
        bounds: Bounds,
        /// Largest power of 2 in brute-force denominators.
        #[arg(long = "den-pow2", default_value_t = 2)]
        den_pow2: u32,
        /// Largest power of q in brute-force denominators.
        #[arg(long = "den-powq", default_value_t = 1)]
        den_powq: u32,
    },
    /// Frey curve invariants and local checks for A a^p + B b^p + C c^p = 0.
    #[allow(non_snake_case)]
    Frey {
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long = "A", allow_hyphen_values = true)]
        A: String,
        #[arg(long = "B", allow_hyphen_values = true)]
        B: String,
        #[arg(long = "C", allow_hyphen_values = true)]
        C: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        p: u32,
        #[arg(long = "factor-budget", default_value_t = aflt_core::density::DEFAULT_FACTOR_BUDGET)]
        factor_budget: u64,
    },
    /// Squarefree densities and the exceptional set C'.
    Density {
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(100..=1_000_000_000))]
        x: u64,
        #[arg(long = "rmax", default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..=125))]
        r_max: u32,
        #[arg(long = "factor-budget", default_value_t = aflt_core::density::DEFAULT_FACTOR_BUDGET)]
        factor_budget: u64,
    },
    /// Prime factor counts of 2^m - 1.
    Mersenne {
        #[arg(long = "mmax", default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..=127))]
        m_max: u32,
        #[arg(long = "factor-budget", default_value_t = aflt_core::density::DEFAULT_FACTOR_BUDGET)]
        factor_budget: u64,
    },
    /// Run `check` over a range of d.
    ///
    /// CSV columns: d, status, outcome, method, t, threshold, certificate_kind, detail.
    Scan {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[command(flatten)]
        radical: RadicalArgs,
        #[command(flatten)]
        bounds: Bounds,
    },
}

/// Parses arguments as the binary would (first item is the program name).
pub fn parse_args<I, T>(args: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(args)
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match parse_args(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok((report, code)) => match emit(&cli, &report) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Builds the report and its exit code without writing anything.
pub fn execute(cli: &Cli) -> Result<(Report, i32), String> {
    let threads = match cli.command {
        Command::Scan { .. } => cli.jobs.map_or(0, usize::from),
        _ => 1,
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
    pool.install(|| commands::dispatch(&cli.command))
}

fn emit(cli: &Cli, report: &Report) -> Result<(), String> {
    let format = cli.format.unwrap_or(match cli.command {
        Command::Scan { .. } => Format::Csv,
        _ => Format::Json,
    });
    let bytes = render::render(report, format)?;
    match &cli.output {
        Some(path) => std::fs::write(path, bytes).map_err(|e| format!("--output {}: {e}", path.display())),
        None => std::io::stdout().write_all(&bytes).map_err(|e| e.to_string()),
    }
}
