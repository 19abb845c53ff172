//! `rainbow`: command-line front end.
//!
//! Reports go to standard output as JSON lines; a short human summary goes
//! to standard error. Exit codes: 0 success, 1 definitive negative answer,
//! 2 invalid input, 3 budget exhausted, 4 internal invariant failure.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use rainbow_core::Error;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "rainbow", version, about = "Rainbow loose Hamilton cycles in uniform hypergraphs")]
struct Cli {
    /// Worker threads; defaults to the number of available cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the run manifest here instead of as the last output line.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Budget {
    /// Node limit for exhaustive searches.
    #[arg(long, default_value_t = 200_000_000)]
    pub node_limit: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    #[arg(long, default_value_t = 1)]
    pub mtilde: usize,
    /// Optional check against `(t(k-1)+1) * mtilde`.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub j: usize,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.01)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub threshold: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub hg: PathBuf,
    #[arg(long)]
    pub col: PathBuf,
    /// Host cycle as one line of vertex ids.
    #[arg(long)]
    pub cycle: PathBuf,
    /// Host position of the first edge of `P_0`.
    #[arg(long, default_value_t = 0)]
    pub p0_start: usize,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Accept by the suitability predicate instead of the event checks.
    #[arg(long)]
    pub structural: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate loose Hamilton cycles.
    Enumerate {
        #[arg(long)]
        hg: PathBuf,
        /// Also count rainbow cycles under this colouring.
        #[arg(long)]
        col: Option<PathBuf>,
        /// Print only the count.
        #[arg(long)]
        count_only: bool,
        /// Write the cycles here, one per line.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Decide whether a rainbow Hamilton cycle exists.
    RainbowExists {
        #[arg(long)]
        hg: PathBuf,
        #[arg(long)]
        col: PathBuf,
        /// Tight instead of loose cycles (k = 3).
        #[arg(long)]
        tight: bool,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Find a loose Hamilton path with prescribed ends.
    HamPath {
        #[arg(long)]
        hg: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// Pairs no edge may contain, one `u v` per line.
        #[arg(long)]
        forbid: Option<PathBuf>,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Per-trial logs of the sampling pipeline.
    Sample(SampleArgs),
    /// Success rate of the sampling pipeline.
    Estimate {
        #[command(flatten)]
        sample: SampleArgs,
        /// Also print every trial record.
        #[arg(long)]
        records: bool,
    },
    /// Build a path tiling of a hypergraph.
    Tile {
        #[arg(long)]
        hg: PathBuf,
        /// Endpoint pairs, one `u v` per line.
        #[arg(long)]
        pairs: PathBuf,
        /// Conflict graph edges, one `u v` per line.
        #[arg(long)]
        conflicts: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long)]
        seed: u64,
        /// Require the claim sizes of the strict window.
        #[arg(long)]
        strict: bool,
    },
    /// Build a feasible switching around `P_0`.
    Switch {
        #[arg(long)]
        hg: PathBuf,
        #[arg(long)]
        col: PathBuf,
        #[arg(long)]
        cycle: PathBuf,
        #[arg(long, default_value_t = 0)]
        p0_start: usize,
        /// Paths of the splitting, one per line, `P_0` first.
        #[arg(long, requires_all = ["partition", "rerouting"], conflicts_with = "sample")]
        splitting: Option<PathBuf>,
        /// Parts of the transverse partition, one per line.
        #[arg(long)]
        partition: Option<PathBuf>,
        /// Rerouting pairs, one `u v` per line.
        #[arg(long)]
        rerouting: Option<PathBuf>,
        /// Obtain the splitting from the sampler.
        #[arg(long)]
        sample: bool,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        seed: u64,
    },
    /// Write an explicit colouring as `.hg` and `.col` files.
    Construct {
        #[command(subcommand)]
        which: Construction,
    },
    /// Local search for a rainbow loose Hamilton cycle.
    Search {
        #[arg(long)]
        hg: PathBuf,
        #[arg(long)]
        col: PathBuf,
        /// Start from this cycle instead of a uniform random one.
        #[arg(long)]
        cycle: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        max_steps: usize,
        #[arg(long, default_value_t = 32)]
        trials_per_step: u64,
    },
    /// Check a Hamilton cycle and whether it is rainbow.
    Verify {
        #[arg(long)]
        hg: PathBuf,
        #[arg(long)]
        col: Option<PathBuf>,
        #[arg(long)]
        cycle: PathBuf,
        #[arg(long)]
        tight: bool,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// Triples meeting some part in two vertices, coloured by that pair.
    TightCx {
        #[arg(long)]
        n: usize,
        /// Output prefix; writes PREFIX.hg and PREFIX.col.
        #[arg(long)]
        out: PathBuf,
    },
    /// Complete k-graph coloured by the first k-1 vertices of each edge.
    Prefix {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Errors of a run, classified by exit code.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::Infeasible { .. }) => 1,
            Failure::Core(Error::Budget(_)) => 3,
            Failure::Core(Error::Invariant(_)) => 4,
            Failure::Core(_) | Failure::Io(..) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    argv: Vec<String>,
    seed: Option<u64>,
    version: &'static str,
    jobs: usize,
    exit_code: u8,
    started_unix_ms: u128,
    wall_ms: f64,
}

/// Writes one stdout line; a closed pipe is not an error.
pub(crate) fn out(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn command_info(c: &Command) -> (&'static str, Option<u64>) {
    match c {
        Command::Enumerate { .. } => ("enumerate", None),
        Command::RainbowExists { .. } => ("rainbow-exists", None),
        Command::HamPath { .. } => ("ham-path", None),
        Command::Sample(s) => ("sample", Some(s.seed)),
        Command::Estimate { sample, .. } => ("estimate", Some(sample.seed)),
        Command::Tile { seed, .. } => ("tile", Some(*seed)),
        Command::Switch { seed, .. } => ("switch", Some(*seed)),
        Command::Construct { .. } => ("construct", None),
        Command::Search { seed, .. } => ("search", Some(*seed)),
        Command::Verify { .. } => ("verify", None),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let started = Instant::now();
    let started_unix_ms = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0);
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (name, seed) = command_info(&cli.command);
    let code = match commands::run(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    };
    let manifest = Manifest {
        command: name,
        argv: std::env::args().collect(),
        seed,
        version: env!("CARGO_PKG_VERSION"),
        jobs: rayon::current_num_threads(),
        exit_code: code,
        started_unix_ms,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    let line = serde_json::json!({ "manifest": manifest }).to_string();
    match &cli.manifest {
        Some(p) => {
            if let Err(e) = std::fs::write(p, line + "\n") {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => out(&line),
    }
    ExitCode::from(code)
}
