mod commands;
mod output;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "corescope", version, about = "Core numbers, local estimators and exposure probabilities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Output file; a `<output>.meta.json` sidecar is written beside it.
    /// Without it the artifact goes to stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorChoice {
    /// Propagating upper bound.
    Hat,
    /// Induced-neighbourhood lower bound.
    Breve,
    Both,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct InputArg {
    /// Edge-list file, or `-` for stdin.
    #[arg(long)]
    pub input: PathBuf,
}

/// Parses `A..B` (inclusive) or a single `A`.
pub fn parse_delta(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected A..B or A, got {s:?}");
    let range = match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            a.trim().parse().map_err(|_| bad())?..=b.trim().parse().map_err(|_| bad())?
        }
        None => {
            let a: usize = s.trim().parse().map_err(|_| bad())?;
            a..=a
        }
    };
    if range.is_empty() {
        return Err(format!("empty delta range {s:?}"));
    }
    Ok(range)
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Core number of every vertex and the shell distribution.
    Cores {
        #[command(flatten)]
        input: InputArg,
    },
    /// Local core-number estimates over a range of radii.
    Estimate {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_parser = parse_delta, default_value = "0..3")]
        delta: RangeInclusive<usize>,
        #[arg(long, value_enum, default_value_t = EstimatorChoice::Both)]
        estimator: EstimatorChoice,
    },
    /// Estimate-to-core ratios: optimal fractions and histograms per radius.
    Ratio {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_parser = parse_delta, default_value = "0..3")]
        delta: RangeInclusive<usize>,
        #[arg(long, value_enum, default_value_t = EstimatorChoice::Both)]
        estimator: EstimatorChoice,
        /// Histogram bin edges, comma separated; defaults depend on the estimator.
        #[arg(long, value_delimiter = ',')]
        bins: Option<Vec<f64>>,
    },
    /// Erdős–Rényi graph G(n, p).
    GenEr {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Graph with a prescribed shell distribution `c_1,...,c_D`.
    GenShell {
        #[arg(value_delimiter = ',', required = true)]
        counts: Vec<usize>,
    },
    /// Complete j-ary tree, optionally with j vertices joined to every leaf.
    GenTree {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        levels: usize,
        #[arg(long)]
        prime: bool,
    },
    /// Analytic distribution of the one-round propagating estimate.
    Pmf {
        #[arg(long)]
        mean_degree: f64,
        #[arg(long, default_value_t = 10)]
        kappa_max: usize,
        #[arg(long)]
        d_max: Option<usize>,
        #[arg(long, default_value_t = corescope::generators::DEFAULT_TAIL_TOLERANCE)]
        tail_tolerance: f64,
    },
    /// Randomized 3-net clustering.
    Cluster {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        degree_biased: bool,
    },
    /// Exposure probabilities of every vertex under a seeded 3-net clustering.
    Exposure {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        kappa: usize,
        #[arg(long)]
        p: f64,
        /// Monte Carlo trials for core exposure; 0 skips the estimate.
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[arg(long)]
        degree_biased: bool,
        /// Foreign-cluster limit for neighbour-degree exposure.
        #[arg(long, default_value_t = corescope::exposure::DEFAULT_CLUSTER_LIMIT)]
        cluster_limit: usize,
    },
    /// Size, degeneracy, diameter and neighbourhood-size statistics.
    Stats {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_parser = parse_delta, default_value = "1..4")]
        delta: RangeInclusive<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Cores { .. } => "cores",
            Command::Estimate { .. } => "estimate",
            Command::Ratio { .. } => "ratio",
            Command::GenEr { .. } => "gen-er",
            Command::GenShell { .. } => "gen-shell",
            Command::GenTree { .. } => "gen-tree",
            Command::Pmf { .. } => "pmf",
            Command::Cluster { .. } => "cluster",
            Command::Exposure { .. } => "exposure",
            Command::Stats { .. } => "stats",
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("CORESCOPE_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow::anyhow!("CORESCOPE_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            anyhow::bail!("CORESCOPE_THREADS must be a positive integer, got 0");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    match e.downcast_ref::<corescope::Error>() {
        Some(err) => err.kind(),
        None if e.downcast_ref::<std::io::Error>().is_some() => "io",
        None => "argument",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| commands::run(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({
                "error": error_kind(&e),
                "command": cli.command.name(),
                "message": format!("{e:#}"),
            });
            eprintln!("{line}");
            ExitCode::FAILURE
        }
    }
}
