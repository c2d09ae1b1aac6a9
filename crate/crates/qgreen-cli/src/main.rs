//! Command-line surface for the qubit-channel Green-function toolkit:
//! ingest channel specifications, run analyses, emit reports and sweep
//! maps, and run the self-test battery.

mod commands;
mod report;
mod spec;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    /// Bad input: malformed spec, incomplete Kraus set, non-CP map.
    Validation(String),
    /// Internal failure: a cross-check residual above tolerance or a
    /// classification that did not verify.
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Internal(m) => m,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser)]
#[command(
    name = "qgreen",
    about = "Qubit-channel analysis through Grassmann Green functions",
    long_about = "Analyzes qubit quantum channels through their Grassmann Green-function \
kernels: Gaussian detection, complete-positivity verdicts, composition, (weakly) \
complementary channels and degradability classification, each cross-checked against a \
dense-matrix oracle.\n\n\
Channel spec (JSON), one of:\n\
  {\"kind\":\"kraus\",\"operators\":[[[[re,im],[re,im]],[[re,im],[re,im]]], ...]}\n\
  {\"kind\":\"tT\",\"t\":[t1,t2,t3],\"T\":[[..],[..],[..]]}\n\
  {\"kind\":\"gaussian_canonical\",\"theta\":x,\"phi\":y,\"q\":z}\n\n\
Angles are radians; complex numbers are [re, im] pairs.\n\
Exit codes: 0 success, 1 internal error, 2 input validation, 3 self-test failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one channel: affine data, kernel, Gaussian detection,
    /// CP verdict, degradability (canonical specs), oracle cross-checks.
    Analyze {
        /// Path to a channel spec (JSON).
        spec: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Compose two channels (second applied after the first) via the
    /// Grassmann convolution and report on the composite.
    Compose {
        /// Path to the first channel spec (applied first).
        spec_a: String,
        /// Path to the second channel spec (applied second).
        spec_b: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Emit the (weakly) complementary channel of a canonical spec:
    /// kernel, Gaussian detection, and degradability when q = 1.
    Complement {
        /// Path to a gaussian_canonical channel spec (JSON).
        spec: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Sweep the (theta, phi, q) grid and write a CSV phase map.
    ///
    /// The grid config is JSON: {"theta_steps":N,"phi_steps":M,
    /// "q_values":[...],"samples":S,"seed":n}; theta and phi run over
    /// [0, 2pi) in N (M) uniform steps. CSV columns, in order:
    /// theta, phi, q, verdict, residual, max_coherent_info.
    /// Floats carry 17 significant digits; rows appear in grid order
    /// (theta outer, phi middle, q inner) regardless of scheduling.
    Sweep {
        /// Path to the grid config (JSON).
        #[arg(long)]
        config: String,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        output: Option<String>,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the pinned convention anchors and the cross-module
    /// correspondence matrix; nonzero exit on any failure.
    Selftest,
}

#[derive(clap::Args)]
struct CommonOpts {
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<String>,
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Seed for the sampled oracle cross-checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Residual gate for oracle cross-checks.
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
}

fn emit(report: &report::Report, common: &CommonOpts) -> Result<(), CliError> {
    let body = match common.format {
        Format::Json => serde_json::to_string_pretty(report)
            .map_err(|e| CliError::Internal(e.to_string()))?,
        Format::Text => report::to_text(report),
    };
    write_out(&body, common.output.as_deref())
}

fn write_out(body: &str, output: Option<&str>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::Internal(format!("cannot write {path}: {e}"))),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn run() -> Result<i32, CliError> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Analyze { spec, common } => {
            let report = commands::analyze(spec, common.seed, common.tolerance)?;
            emit(&report, common)?;
            Ok(0)
        }
        Command::Compose {
            spec_a,
            spec_b,
            common,
        } => {
            let report = commands::compose(spec_a, spec_b, common.seed, common.tolerance)?;
            emit(&report, common)?;
            Ok(0)
        }
        Command::Complement { spec, common } => {
            let report = commands::complement(spec, common.seed, common.tolerance)?;
            emit(&report, common)?;
            Ok(0)
        }
        Command::Sweep {
            config,
            output,
            seed,
        } => {
            let csv = commands::sweep(config, *seed)?;
            write_out(&csv, output.as_deref())?;
            Ok(0)
        }
        Command::Selftest => {
            let failures = commands::selftest();
            Ok(if failures == 0 { 0 } else { 3 })
        }
    }
}

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {}", err.message());
            std::process::exit(err.exit_code());
        }
    }
}
