use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{self, StarRequest};
use crate::config::SuiteConfig;
use crate::error::{CliError, CliResult};
use crate::report::Report;

#[derive(Debug, Parser)]
#[command(name = "haag", version, about = "Moyal star products and Wightman-function checks")]
pub struct Cli {
    /// Leave the timestamp out of the report.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Star product of two or more expressions.
    Star {
        /// Scalar θ: θ^{01} in two dimensions, θ^{12} otherwise.
        #[arg(long, allow_negative_numbers = true, conflicts_with = "theta_file")]
        theta: Option<f64>,
        /// JSON file holding a scalar or a full antisymmetric matrix.
        #[arg(long)]
        theta_file: Option<PathBuf>,
        /// Truncate the series after this order.
        #[arg(long, conflicts_with = "adaptive")]
        order: Option<usize>,
        /// Sum until the remainder bound is below this tolerance.
        #[arg(long)]
        adaptive: Option<f64>,
        #[arg(long, default_value_t = 64)]
        max_order: usize,
        #[arg(long)]
        dim: usize,
        /// Expressions; put `--` before any that start with a minus sign.
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Convergence certificate for the star series of two Gevrey functions.
    Certify {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long = "B", allow_negative_numbers = true)]
        b: f64,
        #[arg(long = "C", allow_negative_numbers = true)]
        c: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
    },
    /// Smeared free-field Wightman functions.
    Wightman {
        kind: WightmanKind,
        #[arg(long)]
        mass: f64,
        #[arg(long)]
        config: PathBuf,
    },
    /// Two-point equality, currents and the triviality verdict.
    HaagCheck {
        #[arg(long)]
        config: PathBuf,
    },
    /// Errors of Taylor-truncated star products against the full product.
    Converge {
        #[arg(long)]
        kmax: u32,
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WightmanKind {
    TwoPoint,
    NPoint,
}

fn dispatch(cmd: &Command) -> CliResult<Report> {
    match cmd {
        Command::Star { theta, theta_file, order, adaptive, max_order, dim, exprs } => commands::star(&StarRequest {
            theta: *theta,
            theta_file: theta_file.as_deref(),
            order: *order,
            adaptive: *adaptive,
            max_order: *max_order,
            dim: *dim,
            exprs,
        }),
        Command::Certify { beta, b, c, theta } => commands::certify(*beta, *b, *c, *theta),
        Command::Wightman { kind, mass, config } => {
            commands::wightman(matches!(kind, WightmanKind::NPoint), *mass, &SuiteConfig::load(config)?)
        }
        Command::HaagCheck { config } => commands::haag_check(&SuiteConfig::load(config)?),
        Command::Converge { kmax, config } => commands::converge(*kmax, &SuiteConfig::load(config)?),
    }
}

/// Runs one invocation and returns the process exit code: 0 on success,
/// 1 when a check fails or a computation cannot meet its tolerance, 2 for
/// usage, parse and config errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli.command).and_then(|r| emit(&cli, r)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, report: Report) -> CliResult<i32> {
    let report = if cli.no_timestamp { report } else { report.stamped() };
    let text = report.to_json();
    match &cli.output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            println!("{}", report.summary());
        }
        None => {
            print!("{text}");
            eprintln!("{}", report.summary());
        }
    }
    Ok(if report.pass { 0 } else { 1 })
}
