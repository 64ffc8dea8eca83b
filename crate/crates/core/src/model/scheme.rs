use std::fmt;

use crate::error::{Error, Result};

/// Additive match/mismatch scoring: `+match_score` per match, `-mismatch_penalty`
/// per mismatch.
///
/// The penalty is stored as a positive magnitude; the sign lives in the
/// accessors that produce per-letter scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScoringScheme {
    match_score: i64,
    mismatch_penalty: i64,
}

impl ScoringScheme {
    /// The BLAST nucleotide default, +1/-3.
    pub const BLAST: ScoringScheme = ScoringScheme {
        match_score: 1,
        mismatch_penalty: 3,
    };

    pub fn new(match_score: i64, mismatch_penalty: i64) -> Result<Self> {
        if match_score < 1 || mismatch_penalty < 1 {
            return Err(Error::InvalidScheme {
                match_score,
                mismatch_penalty,
            });
        }
        Ok(Self {
            match_score,
            mismatch_penalty,
        })
    }

    #[inline]
    pub fn match_score(&self) -> i64 {
        self.match_score
    }

    #[inline]
    pub fn mismatch_penalty(&self) -> i64 {
        self.mismatch_penalty
    }

    /// Score contribution of one letter (`true` = match).
    #[inline]
    pub fn letter_score(&self, is_match: bool) -> i64 {
        if is_match {
            self.match_score
        } else {
            -self.mismatch_penalty
        }
    }

    /// Score of a walk made of `matches` match steps and `mismatches` mismatch steps.
    #[inline]
    pub fn composition_score(&self, matches: usize, mismatches: usize) -> i64 {
        matches as i64 * self.match_score - mismatches as i64 * self.mismatch_penalty
    }
}

impl Default for ScoringScheme {
    fn default() -> Self {
        Self::BLAST
    }
}

impl fmt::Display for ScoringScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(+{}, -{})", self.match_score, self.mismatch_penalty)
    }
}
