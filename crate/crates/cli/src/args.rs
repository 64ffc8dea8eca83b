use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use homseed::search::DEFAULT_MAX_SPAN;
use homseed::{AlignmentModel, Seed};

#[derive(Debug, Parser)]
#[command(name = "homseed", version, about = "Spaced-seed sensitivity on homogeneous gapless alignments")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Score of a match
    #[arg(long = "match", global = true, default_value_t = 1, value_parser = clap::value_parser!(i64).range(1..))]
    pub match_score: i64,

    /// Penalty magnitude of a mismatch
    #[arg(long = "mismatch", global = true, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..))]
    pub mismatch_penalty: i64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Fractional digits of decimal probabilities
    #[arg(long, global = true, default_value_t = 6)]
    pub precision: usize,

    /// Write to this file instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads for sampling and seed search (default: all cores)
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Homogeneous,
    All,
}

impl From<ModelArg> for AlignmentModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Homogeneous => AlignmentModel::Homogeneous,
            ModelArg::All => AlignmentModel::UniformFixedScore,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveModel {
    Homogeneous,
    All,
    Both,
}

impl CurveModel {
    /// Models in output order.
    pub fn models(self) -> Vec<AlignmentModel> {
        match self {
            CurveModel::Homogeneous => vec![AlignmentModel::Homogeneous],
            CurveModel::All => vec![AlignmentModel::UniformFixedScore],
            CurveModel::Both => vec![AlignmentModel::UniformFixedScore, AlignmentModel::Homogeneous],
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count homogeneous alignments of a given length and optional score
    Count {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        length: u64,
        /// Omit to count over all scores
        #[arg(long, allow_hyphen_values = true)]
        score: Option<i64>,
        #[arg(long, value_enum, default_value_t = ModelArg::Homogeneous)]
        model: ModelArg,
    },
    /// Draw uniform random alignments
    Generate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        length: u64,
        /// Omit to draw over all scores
        #[arg(long, allow_hyphen_values = true)]
        score: Option<i64>,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(long, value_enum, default_value_t = ModelArg::Homogeneous)]
        model: ModelArg,
    },
    /// Exact probability that a seed detects a random alignment
    Sensitivity(QueryArgs),
    /// Monte-Carlo estimate of the same probability
    Mc {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// Rank all seeds of a given weight by exact sensitivity
    Optimize {
        #[arg(long)]
        weight: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_SPAN)]
        max_span: usize,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        length: u64,
        #[arg(long, allow_hyphen_values = true)]
        score: i64,
        #[arg(long, value_enum, default_value_t = ModelArg::Homogeneous)]
        model: ModelArg,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        top: u64,
    },
    /// Sensitivity as a function of alignment length at fixed score
    Curve {
        /// May be repeated
        #[arg(long = "seed", required = true)]
        seeds: Vec<Seed>,
        #[arg(long, allow_hyphen_values = true)]
        score: i64,
        /// `a:b` or `a:b:step`, inclusive
        #[arg(long)]
        length_range: LengthRange,
        #[arg(long, value_enum, default_value_t = CurveModel::Both)]
        model: CurveModel,
    },
    /// Run the brute-force consistency checks
    Selfcheck {
        #[arg(long, default_value_t = 14, value_parser = clap::value_parser!(u64).range(1..=20))]
        max_length: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct QueryArgs {
    #[arg(long)]
    pub seed: Seed,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub length: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub score: i64,
    #[arg(long, value_enum, default_value_t = ModelArg::Homogeneous)]
    pub model: ModelArg,
    /// Required number of seed occurrences
    #[arg(long, default_value_t = 1)]
    pub occurrences: usize,
    /// Largest overlap allowed between consecutive occurrences (default: span - 1)
    #[arg(long)]
    pub overlap: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthRange {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl LengthRange {
    pub fn lengths(&self) -> impl Iterator<Item = usize> {
        (self.start..=self.end).step_by(self.step)
    }
}

impl FromStr for LengthRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(format!("expected a:b or a:b:step, got {s:?}"));
        }
        let num = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}"));
        let start = num(parts[0])?;
        let end = num(parts[1])?;
        let step = parts.get(2).map(|p| num(p)).transpose()?.unwrap_or(1);
        if start == 0 || start > end || step == 0 {
            return Err(format!("empty or invalid range {s:?}"));
        }
        Ok(Self { start, end, step })
    }
}
