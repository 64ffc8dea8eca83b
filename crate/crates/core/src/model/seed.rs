use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::Alignment;

/// Longest span a seed may have; windows are compared as single `u64` words.
pub const MAX_SPAN: usize = 64;

/// A spaced seed over `{1 = required match, 0 = don't care}`.
///
/// Seeds are canonical: the first and last symbols are `1`. Any other pattern
/// detects exactly what its trimmed form detects.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed {
    // Ordered by text form so derived `Ord` is lexicographic on the pattern.
    text: String,
    mask: u64,
}

impl Seed {
    pub fn from_pattern(pattern: &[bool]) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::InvalidSeed("seed must be non-empty".into()));
        }
        if pattern.len() > MAX_SPAN {
            return Err(Error::InvalidSeed(format!(
                "span {} exceeds the maximum of {MAX_SPAN}",
                pattern.len()
            )));
        }
        if !pattern[0] || !pattern[pattern.len() - 1] {
            return Err(Error::InvalidSeed(
                "seed must begin and end with a required match '1'".into(),
            ));
        }
        let mask = pattern
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0u64, |acc, (j, _)| acc | (1 << j));
        let text = pattern.iter().map(|&b| if b { '1' } else { '0' }).collect();
        Ok(Self { text, mask })
    }

    /// The contiguous seed `1^weight`.
    pub fn contiguous(weight: usize) -> Result<Self> {
        Self::from_pattern(&vec![true; weight])
    }

    #[inline]
    pub fn span(&self) -> usize {
        self.text.len()
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Required positions as a bit mask, bit `j` = pattern position `j`.
    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn pattern(&self) -> impl Iterator<Item = bool> + '_ {
        self.text.bytes().map(|b| b == b'1')
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Whether the seed matches a window packed with bit `j` = window letter `j`.
    #[inline]
    pub fn matches_window(&self, window: u64) -> bool {
        window & self.mask == self.mask
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl FromStr for Seed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let pattern = s
            .trim()
            .chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(Error::InvalidSeed(format!(
                    "unexpected character {other:?}, expected '0' or '1'"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_pattern(&pattern)
    }
}

/// A hit requires `occurrences` seed occurrences in which consecutive ones
/// overlap by at most `max_overlap` letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DetectionStrategy {
    seed: Seed,
    occurrences: usize,
    max_overlap: usize,
}

impl DetectionStrategy {
    pub fn new(seed: Seed, occurrences: usize, max_overlap: usize) -> Result<Self> {
        if occurrences == 0 {
            return Err(Error::InvalidStrategy(
                "at least one occurrence is required".into(),
            ));
        }
        if max_overlap >= seed.span() {
            return Err(Error::InvalidStrategy(format!(
                "max overlap {max_overlap} must be below the span {}",
                seed.span()
            )));
        }
        Ok(Self {
            seed,
            occurrences,
            max_overlap,
        })
    }

    /// One occurrence of `seed`.
    pub fn single(seed: Seed) -> Self {
        let max_overlap = seed.span() - 1;
        Self {
            seed,
            occurrences: 1,
            max_overlap,
        }
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn occurrences(&self) -> usize {
        self.occurrences
    }

    pub fn max_overlap(&self) -> usize {
        self.max_overlap
    }

    /// Minimum distance between the end positions of consecutive occurrences.
    pub fn min_gap(&self) -> usize {
        self.seed.span() - self.max_overlap
    }
}

/// 1-based end positions of every window the seed matches, ascending.
pub fn occurrence_ends(seed: &Seed, alignment: &Alignment) -> Vec<usize> {
    let span = seed.span();
    if span > alignment.len() {
        return Vec::new();
    }
    (span..=alignment.len())
        .filter(|&end| seed.matches_window(alignment.window(end - span, span)))
        .collect()
}

pub fn seed_detects(seed: &Seed, alignment: &Alignment) -> bool {
    let span = seed.span();
    span <= alignment.len()
        && (0..=alignment.len() - span).any(|start| seed.matches_window(alignment.window(start, span)))
}

/// Greedy left-to-right selection of occurrence ends; taking the earliest
/// admissible end is optimal for a minimum-gap constraint.
pub fn strategy_detects(strategy: &DetectionStrategy, alignment: &Alignment) -> bool {
    let gap = strategy.min_gap();
    let mut selected = 0;
    let mut last: Option<usize> = None;
    for end in occurrence_ends(strategy.seed(), alignment) {
        if last.is_none_or(|prev| end - prev >= gap) {
            selected += 1;
            last = Some(end);
            if selected == strategy.occurrences() {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn seed(text: &str) -> Seed {
        text.parse().unwrap()
    }

    fn a(text: &str) -> Alignment {
        text.parse().unwrap()
    }

    /// Exhaustive check over every subset of occurrence ends.
    fn detects_by_subsets(strategy: &DetectionStrategy, alignment: &Alignment) -> bool {
        let ends = occurrence_ends(strategy.seed(), alignment);
        (0u64..(1 << ends.len())).any(|subset| {
            let chosen: Vec<usize> = (0..ends.len())
                .filter(|&j| subset >> j & 1 == 1)
                .map(|j| ends[j])
                .collect();
            chosen.len() == strategy.occurrences()
                && chosen.windows(2).all(|w| w[1] - w[0] >= strategy.min_gap())
        })
    }

    #[test]
    fn seed_validation() {
        assert!("".parse::<Seed>().is_err());
        assert!("0110".parse::<Seed>().is_err());
        assert!("110".parse::<Seed>().is_err());
        assert!("1x1".parse::<Seed>().is_err());
        let s = seed("110100110010101111");
        assert_eq!((s.span(), s.weight()), (18, 11));
        assert_eq!(s.to_string(), "110100110010101111");
    }

    #[test]
    fn strategy_validation() {
        assert!(DetectionStrategy::new(seed("101"), 0, 0).is_err());
        assert!(DetectionStrategy::new(seed("101"), 2, 3).is_err());
        let st = DetectionStrategy::new(seed("101"), 2, 2).unwrap();
        assert_eq!(st.min_gap(), 1);
    }

    #[test]
    fn detection_examples() {
        assert!(seed_detects(&seed("101"), &a("11011")));
        assert_eq!(occurrence_ends(&seed("101"), &a("11011")), vec![4]);
        assert!(!seed_detects(&seed("11"), &a("10101")));
        assert!(!seed_detects(&seed("1111"), &a("111")));

        let one = DetectionStrategy::new(seed("1"), 2, 0).unwrap();
        assert!(strategy_detects(&one, &a("11011")));

        // Occurrences of 111 end at 3 and 7; 7 - 3 >= 3 so two disjoint hits exist.
        let triple = DetectionStrategy::new(seed("111"), 2, 0).unwrap();
        assert_eq!(occurrence_ends(&seed("111"), &a("1110111")), vec![3, 7]);
        assert!(strategy_detects(&triple, &a("1110111")));
        assert!(detects_by_subsets(&triple, &a("1110111")));
        assert!(!strategy_detects(&triple, &a("1111101")));
    }

    #[test]
    fn greedy_matches_subset_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let span = rng.gen_range(1..=5);
            let mut pattern: Vec<bool> = (0..span).map(|_| rng.gen_bool(0.6)).collect();
            pattern[0] = true;
            pattern[span - 1] = true;
            let s = Seed::from_pattern(&pattern).unwrap();
            let k = rng.gen_range(1..=3);
            let overlap = rng.gen_range(0..span);
            let strategy = DetectionStrategy::new(s, k, overlap).unwrap();
            let n = rng.gen_range(1..=14);
            let x = Alignment::from_letters((0..n).map(|_| rng.gen_bool(0.7))).unwrap();
            assert_eq!(
                strategy_detects(&strategy, &x),
                detects_by_subsets(&strategy, &x),
                "{strategy:?} on {x}"
            );
        }
    }

    #[test]
    fn single_occurrence_strategy_is_seed_detection() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let span = rng.gen_range(1..=8);
            let mut pattern: Vec<bool> = (0..span).map(|_| rng.gen_bool(0.5)).collect();
            pattern[0] = true;
            pattern[span - 1] = true;
            let s = Seed::from_pattern(&pattern).unwrap();
            let n = rng.gen_range(1..=30);
            let x = Alignment::from_letters((0..n).map(|_| rng.gen_bool(0.7))).unwrap();
            let strategy = DetectionStrategy::single(s.clone());
            assert_eq!(strategy_detects(&strategy, &x), seed_detects(&s, &x));
        }
    }
}
