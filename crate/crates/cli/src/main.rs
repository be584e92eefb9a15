//! `l2burau`: command-line front end for reduced L²-Burau maps, `F_Q`
//! evaluation, Markov-move experiments and Alexander polynomials.

mod commands;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use l2burau_core::{DetOptions, Method};

#[derive(Parser, Debug)]
#[command(name = "l2burau", version, about = "L2-Burau maps, F_Q values and Markov-move experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the reduced Burau matrix of a braid.
    Burau(BraidArgs),
    /// Evaluate F_Q at one or more values of t.
    Fq(EvalArgs),
    /// Apply a sequence of Markov moves and compare F_Q across the stages.
    Markov(MarkovArgs),
    /// Alexander polynomial of a braid with knot closure.
    Alexander(AlexanderArgs),
    /// Reproduce one of the two non-invariance counter-examples.
    Counterexample(CounterArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Print JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Print CSV.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Write to a file instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
}

impl Common {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Text
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct BraidArgs {
    /// Braid word as signed generator indices, e.g. "1 -2 1".
    #[arg(short = 'b', long = "braid", allow_hyphen_values = true)]
    pub braid: String,
    /// Strand count; defaults to the largest index plus one.
    #[arg(short = 'n', long = "strands")]
    pub strands: Option<usize>,
    /// id, phi, ab or custom:<file>.
    #[arg(short = 'f', long = "family", default_value = "id")]
    pub family: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Backend {
    /// roots, quad, series or eps; chosen from the coefficient group if absent.
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,
    /// Finest quadrature grid per axis.
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Number of trace-series terms.
    #[arg(long = "series-len", default_value_t = 30)]
    pub series_len: usize,
    /// Accelerate the trace series.
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_value_t = true, default_missing_value = "true")]
    pub accel: bool,
}

impl Backend {
    pub fn options(&self) -> DetOptions {
        DetOptions {
            method: self.method,
            grid: self.grid,
            series_len: self.series_len,
            accel: self.accel,
            ..DetOptions::default()
        }
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    #[command(flatten)]
    pub braid: BraidArgs,
    /// Values of t, comma-separated.
    #[arg(short = 't', long = "t-values", value_delimiter = ',', default_value = "1", allow_hyphen_values = true)]
    pub t: Vec<f64>,
    #[command(flatten)]
    pub backend: Backend,
}

#[derive(Args, Debug, Clone)]
pub struct MarkovArgs {
    #[command(flatten)]
    pub eval: EvalArgs,
    /// Moves separated by `;`, e.g. "conj 1 -2; stab +1".
    #[arg(short = 'm', long = "moves", allow_hyphen_values = true)]
    pub moves: String,
}

#[derive(Args, Debug, Clone)]
pub struct AlexanderArgs {
    #[arg(short = 'b', long = "braid", allow_hyphen_values = true)]
    pub braid: String,
    #[arg(short = 'n', long = "strands")]
    pub strands: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Abelianization,
    Identity,
}

#[derive(Args, Debug, Clone)]
pub struct CounterArgs {
    pub which: Which,
    #[command(flatten)]
    pub backend: Backend,
    #[command(flatten)]
    pub common: Common,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn parse(e: impl Into<anyhow::Error>) -> Self {
        Failure { code: 2, error: e.into() }
    }

    pub fn backend(e: impl Into<anyhow::Error>) -> Self {
        Failure { code: 3, error: e.into() }
    }

    pub fn other(e: impl Into<anyhow::Error>) -> Self {
        Failure { code: 1, error: e.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("L2BURAU_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Failure::parse(anyhow::anyhow!("L2BURAU_THREADS must be a positive integer, got `{v}`")))?;
    if n == 0 {
        return Err(Failure::parse(anyhow::anyhow!("L2BURAU_THREADS must be positive")));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(Failure::other)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Burau(a) => commands::burau(&a),
        Command::Fq(a) => commands::fq(&a),
        Command::Markov(a) => commands::markov(&a),
        Command::Alexander(a) => commands::alexander(&a),
        Command::Counterexample(a) => commands::counterexample(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
