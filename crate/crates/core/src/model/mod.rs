//! Scoring, alignments, walks, seeds and detection strategies.

mod alignment;
pub mod oracle;
mod scheme;
mod seed;

pub use alignment::{
    from_walk, is_homogeneous, is_homogeneous_by_segments, score, to_walk, Alignment, Walk,
};
pub use scheme::ScoringScheme;
pub use seed::{
    occurrence_ends, seed_detects, strategy_detects, DetectionStrategy, Seed, MAX_SPAN,
};
