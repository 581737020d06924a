//! `primemeans`: constants, expansions, tables and verification runs for the
//! ratio of the arithmetic and geometric means of the first n primes.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use primemeans::Precision;

#[derive(Debug, Parser)]
#[command(name = "primemeans", version, about, long_about = None)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print k_1..k_m, r_1..r_m and the tabulated polynomials Q_k, R_k, T_k.
    Constants {
        #[arg(long, short, default_value_t = 5)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the expansion of A_n/G_n in powers of 1/L, L = log p_n.
    Expand {
        #[arg(default_value_t = 5)]
        order: usize,
    },
    /// Tabulate n, p_n, A_n, G_n, D(n), R(n) and A_n/G_n.
    Tabulate {
        /// Specific n values (repeatable); overrides --from/--to.
        #[arg(long = "n", value_parser = parse_count)]
        n: Vec<u64>,
        #[arg(long, default_value = "1", value_parser = parse_count)]
        from: u64,
        #[arg(long, default_value = "10", value_parser = parse_count)]
        to: u64,
        #[arg(long, default_value = "1", value_parser = parse_count)]
        step: u64,
        #[arg(long, default_value = "double-double")]
        precision: Precision,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check catalog bounds over a range of n.
    Verify(VerifyArgs),
    /// Smallest n* from which a bound holds through --to.
    Crossover {
        #[arg(long)]
        bound: String,
        #[arg(long, default_value = "1000000", value_parser = parse_count)]
        to: u64,
        #[arg(long, default_value = "double-double")]
        precision: Precision,
    },
    /// List n in [--from, --to) where A_{n+1}/G_{n+1} >= A_n/G_n.
    Monotone {
        #[arg(long, default_value = "226", value_parser = parse_count)]
        from: u64,
        #[arg(long, default_value = "1000000", value_parser = parse_count)]
        to: u64,
        #[arg(long, default_value = "double-double")]
        precision: Precision,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Continue a verification run from a checkpoint file.
    Resume {
        #[arg(long)]
        checkpoint: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List the catalog of bounds.
    Catalog {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Bound id (repeatable). Defaults to every catalog entry.
    #[arg(long)]
    pub bound: Vec<String>,
    /// First n; defaults to each bound's claimed start.
    #[arg(long, value_parser = parse_count)]
    pub from: Option<u64>,
    #[arg(long, default_value = "1000000", value_parser = parse_count)]
    pub to: u64,
    #[arg(long, default_value = "double-double")]
    pub precision: Precision,
    /// Checkpoint file, written periodically and when halting.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Write a checkpoint every this many n.
    #[arg(long, value_parser = parse_count)]
    pub checkpoint_every: Option<u64>,
    /// Stop after this n (a checkpoint is written if a path is set).
    #[arg(long, value_parser = parse_count)]
    pub halt_at: Option<u64>,
    /// Sieve segment size in bits (multiple of 64).
    #[arg(long)]
    pub segment_bits: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Accepts `1000000`, `1_000_000` and `1e6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    if let Some((mant, exp)) = t.split_once(['e', 'E']) {
        if let (Ok(m), Ok(e)) = (mant.parse::<u64>(), exp.parse::<u32>()) {
            if let Some(v) = 10u64.checked_pow(e).and_then(|p| p.checked_mul(m)) {
                return Ok(v);
            }
        }
    }
    Err(format!("{s:?} is not a non-negative integer"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
