//! Command-line front end: experiment orchestration, reproducible parallel
//! Monte Carlo, and CSV/JSON emission for the solver and analytics
//! operations.
//!
//! Output is buffered in full before anything is written, so files are never
//! silently truncated; for a fixed configuration (threads aside) the bytes
//! are deterministic. Exit codes: 0 on success, 2 on usage errors, 3 when a
//! dimension exceeds a resource cap, 1 otherwise.

mod commands;
pub mod output;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use hyperfpp::solver::DEFAULT_DP_CAP;
pub use output::OutputFormat;

pub fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// Environment variable overriding the DP dimension cap (the `--cap` flag
/// wins over it).
pub const CAP_ENV_VAR: &str = "HYPERFPP_CAP";

#[derive(Parser, Debug)]
#[command(
    name = "hyperfpp",
    version,
    about = "Oriented first-passage percolation on the hypercube: exact solvers, reproducible Monte Carlo and tail analytics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Option<OutputFormat>,

    /// Write the records to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads for replica-parallel commands.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub threads: Option<u64>,

    /// Cap on the DP dimension (defaults to HYPERFPP_CAP or 24).
    #[arg(long, global = true)]
    pub cap: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample exact minimum path weights over replicas, with summary quantiles.
    Sample {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        reps: u64,
    },
    /// Sweep dimensions and summarise sampled minima per dimension.
    Convergence {
        #[arg(long, value_delimiter = ',', default_value = "10,14,18,22")]
        ns: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        reps: u64,
    },
    /// Closed-form law of the minimum over fully independent path sums.
    Independent {
        #[arg(long, default_value_t = 20)]
        n_min: u32,
        #[arg(long, default_value_t = 60)]
        n_max: u32,
        /// Also evaluate the cdf at this threshold.
        #[arg(long)]
        x: Option<f64>,
    },
    /// Count paths below a threshold by exhaustive enumeration (n <= 11).
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        reps: u64,
        /// Weight threshold; defaults to 1 + eps/3.
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        #[arg(long, default_value_t = 0.08)]
        c: f64,
        /// Constrain first/last directions to boundary blocks and count
        /// against the middle sum.
        #[arg(long)]
        constrained: bool,
        #[arg(long)]
        size_a: Option<u32>,
        #[arg(long)]
        size_a_prime: Option<u32>,
    },
    /// Exact path-overlap tables with the closed-form bounds.
    Fnk {
        #[arg(long)]
        n: u32,
    },
    /// Gamma lower-tail grid with the correction factor and its bracket.
    Tail {
        #[arg(long, default_value_t = 50)]
        n_max: u32,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1,1.5,2,3")]
        xs: Vec<f64>,
    },
    /// Log-space second-moment bound terms over a dimension sweep.
    Bounds {
        #[arg(long, value_delimiter = ',', default_value = "1e4,1e8,1e12,1e14,1e16")]
        ns: Vec<f64>,
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        #[arg(long, default_value_t = 0.08)]
        c: f64,
    },
    /// Simulated good-edge fractions against the closed form.
    Goodedges {
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        #[arg(long, default_value_t = 0.1)]
        t: f64,
        #[arg(long, default_value_t = 100)]
        reps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Empirical moments of the constrained path count (n <= 9).
    Secondmoment {
        #[arg(long, default_value_t = 7)]
        n: u32,
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        #[arg(long, default_value_t = 0.08)]
        c: f64,
        #[arg(long)]
        size_a: Option<u32>,
        #[arg(long)]
        size_a_prime: Option<u32>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Lib(hyperfpp::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => e.fmt(f),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<hyperfpp::Error> for CliError {
    fn from(e: hyperfpp::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(hyperfpp::Error::Resource { .. }) => 3,
            _ => 1,
        }
    }
}

fn resolve_cap(flag: Option<u32>) -> u32 {
    flag.or_else(|| std::env::var(CAP_ENV_VAR).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_DP_CAP)
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Run a parsed command and return the fully rendered output bytes.
pub fn execute(cli: &Cli) -> Result<Vec<u8>, CliError> {
    let threads = cli.threads.map_or_else(default_threads, |t| t as usize);
    let cap = resolve_cap(cli.cap);
    let table = match &cli.command {
        Command::Sample { n, seed, reps } => commands::sample(*n, *seed, *reps, threads, cap)?,
        Command::Convergence { ns, seed, reps } => {
            commands::convergence(ns, *seed, *reps, threads, cap)?
        }
        Command::Independent { n_min, n_max, x } => commands::independent(*n_min, *n_max, *x)?,
        Command::Enumerate {
            n,
            seed,
            reps,
            x,
            eps,
            c,
            constrained,
            size_a,
            size_a_prime,
        } => commands::enumerate(
            *n,
            *seed,
            *reps,
            *x,
            *eps,
            *c,
            *constrained,
            *size_a,
            *size_a_prime,
        )?,
        Command::Fnk { n } => commands::fnk(*n)?,
        Command::Tail { n_max, xs } => commands::tail(*n_max, xs)?,
        Command::Bounds { ns, eps, c } => commands::bounds(ns, *eps, *c)?,
        Command::Goodedges { n, t, reps, seed } => commands::goodedges(*n, *t, *reps, *seed)?,
        Command::Secondmoment {
            n,
            eps,
            seed,
            reps,
            c,
            size_a,
            size_a_prime,
        } => commands::secondmoment(*n, *eps, *seed, *reps, *c, *size_a, *size_a_prime)?,
    };
    Ok(table.render(cli.format.unwrap_or(OutputFormat::Csv)))
}

/// Execute and write the records to the configured destination in one shot.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let bytes = execute(cli)?;
    match &cli.output {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            handle.write_all(&bytes)?;
            handle.flush()?;
        }
    }
    Ok(())
}
