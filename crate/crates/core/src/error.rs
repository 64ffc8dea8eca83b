use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid scoring scheme: match score {match_score} and mismatch penalty {mismatch_penalty} must both be >= 1")]
    InvalidScheme {
        match_score: i64,
        mismatch_penalty: i64,
    },

    #[error("invalid alignment: {0}")]
    InvalidAlignment(String),

    #[error("invalid walk: {0}")]
    InvalidWalk(String),

    #[error("invalid seed: {0}")]
    InvalidSeed(String),

    #[error("invalid detection strategy: {0}")]
    InvalidStrategy(String),

    #[error("invalid search: {0}")]
    InvalidSearch(String),

    #[error("length {n} exceeds the brute-force oracle limit of {limit}")]
    OracleLimit { n: usize, limit: usize },

    #[error("no alignment of length {n} and score {score} exists in the requested model")]
    InfeasibleScore { n: usize, score: i64 },

    #[error("rejection sampler gave up after {attempts} attempts")]
    RejectionBudget { attempts: u64 },

    #[error("horizon {n} exceeds the free-score table cap of {limit}")]
    HorizonTooLarge { n: usize, limit: usize },

    #[error("generation state {0} has no completions")]
    UnreachableState(String),

    #[error("length must be at least 1")]
    EmptyLength,
}

pub type Result<T> = std::result::Result<T, Error>;
