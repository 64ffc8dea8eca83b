//! Spaced-seed sensitivity on homogeneous gapless alignments.
//!
//! An alignment is reduced to its match/mismatch letters and scored with a
//! `(+s, -p)` scheme. It is *homogeneous* when no proper segment scores as
//! much as the whole, which is the shape of alignments that seed-and-extend
//! search tools actually report. This crate
//!
//! * counts homogeneous alignments exactly ([`count`]),
//! * draws them uniformly at random ([`sample`]),
//! * computes the exact probability that a spaced seed, or a multi-hit
//!   strategy, detects a random homogeneous alignment of given length and
//!   score, and the same probability over all alignments of that length and
//!   score ([`sensitivity`]),
//! * searches all seeds of a given weight for the most sensitive one
//!   ([`search`]).

pub mod count;
pub mod decimal;
pub mod error;
pub mod model;
pub mod sample;
pub mod search;
pub mod sensitivity;

pub use count::{
    binomial, count_homogeneous, count_unconstrained, feasible_composition, Composition, CountTableC,
    CountTableD,
};
pub use error::{Error, Result};
pub use model::oracle::{enumerate_fixed_score, enumerate_homogeneous, ORACLE_LIMIT};
pub use model::{
    from_walk, is_homogeneous, is_homogeneous_by_segments, occurrence_ends, score, seed_detects,
    strategy_detects, to_walk, Alignment, DetectionStrategy, ScoringScheme, Seed, Walk,
};
pub use sample::{
    next_letter_probability, sample_fixed, sample_free, sample_rejection, sample_unconstrained,
    FixedScoreSampler, FreeScoreSampler, RandomStream,
};
pub use search::{enumerate_seeds, find_optimal, RankedSeed, RankedSeeds, SearchSpec};
pub use sensitivity::{
    hit_probability, mc_estimate, mc_estimate_parallel, viable_suffixes, AlignmentModel, McEstimate,
    SensitivityEngine, SensitivityQuery, SensitivityReport, SuffixState,
};
