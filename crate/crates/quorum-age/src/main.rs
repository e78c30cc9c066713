//! Command-line front end: each subcommand parses flags, calls into the
//! library, and prints one JSON (or CSV) document.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quorum_age::{
    analytics, experiments, simulator, Error, QuorumConfig, ShiftedExponential, SimOptions,
    TableFormat,
};

#[derive(Parser)]
#[command(
    name = "quorum-age",
    version,
    about = "Average age of content read from quorum-replicated storage",
    long_about = "Computes, approximates, optimizes, and simulates the time-average \
                  age of information of content read from an n-node replicated store \
                  with write quorum w and read quorum r under shifted-exponential \
                  write delays."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DelayArgs {
    /// Exponential rate of the write delay.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Constant shift of the write delay.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
}

impl DelayArgs {
    fn build(&self) -> Result<ShiftedExponential, Error> {
        ShiftedExponential::new(self.lambda, self.c)
    }
}

#[derive(Args)]
struct EffortArgs {
    /// Write intervals per simulation run.
    #[arg(long, default_value_t = 100_000)]
    intervals: u64,
    /// Intervals discarded before statistics are collected.
    #[arg(long, default_value_t = 1_000)]
    warmup: u64,
    /// Independent replications to pool.
    #[arg(long, default_value_t = 1)]
    replications: u32,
    /// Base RNG seed; replication i uses seed + i.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact average age and its renewal decomposition.
    Analyze {
        /// Number of storage nodes.
        #[arg(long)]
        n: usize,
        /// Write quorum size.
        #[arg(long)]
        w: usize,
        /// Read quorum size.
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        delay: DelayArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Large-system approximation of the average age.
    Approx {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        delay: DelayArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Age-minimizing write quorum size for a given read quorum.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        delay: DelayArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo estimate of the average age.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        delay: DelayArgs,
        #[command(flatten)]
        effort: EffortArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Age versus write quorum size: exact, approximate, optionally simulated.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        delay: DelayArgs,
        /// Also simulate every sweep point.
        #[arg(long)]
        simulate: bool,
        #[command(flatten)]
        effort: EffortArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Serialize)]
struct ApproxReport {
    n: usize,
    w: usize,
    r: usize,
    lambda: f64,
    c: f64,
    approx_age: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let mut source = std::error::Error::source(&err);
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            match err {
                Error::InvalidDistribution(_)
                | Error::InvalidQuorum(_)
                | Error::InvalidParameter(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Analyze {
            n,
            w,
            r,
            delay,
            out,
        } => {
            let breakdown =
                analytics::exact_average_age(QuorumConfig::new(n, w, r)?, delay.build()?);
            emit_one(&breakdown, &out)
        }
        Command::Approx {
            n,
            w,
            r,
            delay,
            out,
        } => {
            let d = delay.build()?;
            let approx_age = analytics::approx_average_age(QuorumConfig::new(n, w, r)?, d)?;
            let report = ApproxReport {
                n,
                w,
                r,
                lambda: d.rate(),
                c: d.shift(),
                approx_age,
            };
            emit_one(&report, &out)
        }
        Command::Optimize { n, r, delay, out } => {
            let best = analytics::optimal_write_quorum(n, r, delay.build()?)?;
            emit_one(&best, &out)
        }
        Command::Simulate {
            n,
            w,
            r,
            delay,
            effort,
            out,
        } => {
            let stats = simulator::replicate(
                QuorumConfig::new(n, w, r)?,
                delay.build()?,
                effort.intervals,
                effort.warmup,
                effort.replications,
                effort.seed,
            )?;
            emit_one(&stats, &out)
        }
        Command::Sweep {
            n,
            r,
            delay,
            simulate,
            effort,
            out,
        } => {
            let d = delay.build()?;
            let sim = simulate.then_some(SimOptions {
                intervals: effort.intervals,
                warmup: effort.warmup,
                replications: effort.replications,
                base_seed: effort.seed,
            });
            let grid = experiments::default_w_grid(n);
            let rows = experiments::sweep_write_quorum(n, r, d, &grid, sim)?;
            let ages: Vec<f64> = rows.iter().map(|row| row.exact_age).collect();
            if experiments::first_difference_sign_changes(&ages) > 1 {
                eprintln!("warning: exact age curve is not unimodal on this sweep");
            }
            let format = table_format(out.format);
            match &out.output {
                Some(path) => experiments::write_table_file(&rows, format, path),
                None => experiments::emit_table(&rows, format, std::io::stdout().lock()),
            }
        }
    }
}

fn table_format(format: Format) -> TableFormat {
    match format {
        Format::Json => TableFormat::Json,
        Format::Csv => TableFormat::Csv,
    }
}

/// Renders a single record as JSON (or a one-row CSV table) to stdout or a
/// file; file writes go through a temp sibling and a rename.
fn emit_one<T: Serialize>(value: &T, out: &OutputArgs) -> Result<(), Error> {
    let mut buf = Vec::new();
    match out.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, value)?;
            buf.push(b'\n');
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(&mut buf);
            writer.serialize(value)?;
            writer.flush()?;
            drop(writer);
        }
    }
    match &out.output {
        Some(path) => write_atomic(path, &buf),
        None => {
            std::io::stdout().lock().write_all(&buf)?;
            Ok(())
        }
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let mut tmp_name = path.as_os_str().to_owned();
    tmp_name.push(".tmp");
    let tmp = PathBuf::from(tmp_name);
    std::fs::write(&tmp, bytes).map_err(|source| Error::WriteFile {
        path: tmp.clone(),
        source,
    })?;
    std::fs::rename(&tmp, path).map_err(|source| Error::WriteFile {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}
