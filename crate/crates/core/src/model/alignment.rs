use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::ScoringScheme;

/// A gapless alignment abstracted to its match (`1`) / mismatch (`0`) letters.
///
/// Letters are packed 64 per word; letter `i` is bit `i % 64` of word `i / 64`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alignment {
    len: usize,
    words: Vec<u64>,
}

impl Alignment {
    pub fn from_letters<I>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = bool>,
    {
        let mut words = Vec::new();
        let mut len = 0;
        for letter in letters {
            if len % 64 == 0 {
                words.push(0);
            }
            if letter {
                words[len / 64] |= 1 << (len % 64);
            }
            len += 1;
        }
        if len == 0 {
            return Err(Error::InvalidAlignment("alignment must be non-empty".into()));
        }
        Ok(Self { len, words })
    }

    /// Builds an alignment of length `len <= 64` whose letter `i` is bit `i` of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Result<Self> {
        if len == 0 || len > 64 {
            return Err(Error::InvalidAlignment(format!(
                "mask alignments need 1 <= length <= 64, got {len}"
            )));
        }
        let keep = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Ok(Self {
            len,
            words: vec![mask & keep],
        })
    }

    pub fn all_matches(len: usize) -> Result<Self> {
        Self::from_letters(std::iter::repeat_n(true, len))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; alignments have at least one letter.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "letter index {i} out of range for length {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn letters(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn matches(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn mismatches(&self) -> usize {
        self.len - self.matches()
    }

    /// Letters `start..start + width` packed so that bit `j` is letter `start + j`.
    pub fn window(&self, start: usize, width: usize) -> u64 {
        debug_assert!(width <= 64 && start + width <= self.len);
        if width == 0 {
            return 0;
        }
        let word = start / 64;
        let offset = start % 64;
        let mut bits = self.words[word] >> offset;
        if offset != 0 && offset + width > 64 {
            bits |= self.words[word + 1] << (64 - offset);
        }
        if width == 64 {
            bits
        } else {
            bits & ((1u64 << width) - 1)
        }
    }
}

impl PartialOrd for Alignment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on the 0/1 text form.
impl Ord for Alignment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters().cmp(other.letters())
    }
}

impl fmt::Display for Alignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: String = self.letters().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&text)
    }
}

impl FromStr for Alignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let letters = s
            .chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(Error::InvalidAlignment(format!(
                    "unexpected character {other:?}, expected '0' or '1'"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_letters(letters)
    }
}

/// Lattice walk of prefix scores: point `k` is `(k, y_k)` with `y_0 = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    points: Vec<(usize, i64)>,
}

impl Walk {
    /// Accepts any sequence of points starting at the origin with unit abscissa
    /// steps; the ordinate steps are checked against a scheme by [`from_walk`].
    pub fn from_points(points: Vec<(usize, i64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidWalk("a walk needs at least one step".into()));
        }
        if points[0] != (0, 0) {
            return Err(Error::InvalidWalk(format!(
                "walk must start at (0, 0), got {:?}",
                points[0]
            )));
        }
        if let Some((k, _)) = points.iter().enumerate().find(|(k, p)| p.0 != *k) {
            return Err(Error::InvalidWalk(format!("abscissa of point {k} is not {k}")));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(usize, i64)] {
        &self.points
    }

    pub fn ordinates(&self) -> impl Iterator<Item = i64> + '_ {
        self.points.iter().map(|&(_, y)| y)
    }

    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    pub fn end(&self) -> (usize, i64) {
        *self.points.last().expect("walks are non-empty")
    }
}

pub fn score(alignment: &Alignment, scheme: &ScoringScheme) -> i64 {
    scheme.composition_score(alignment.matches(), alignment.mismatches())
}

pub fn to_walk(alignment: &Alignment, scheme: &ScoringScheme) -> Walk {
    let mut points = Vec::with_capacity(alignment.len() + 1);
    let mut y = 0;
    points.push((0, 0));
    for (k, letter) in alignment.letters().enumerate() {
        y += scheme.letter_score(letter);
        points.push((k + 1, y));
    }
    Walk { points }
}

pub fn from_walk(walk: &Walk, scheme: &ScoringScheme) -> Result<Alignment> {
    let letters = walk
        .points
        .windows(2)
        .map(|pair| {
            let step = pair[1].1 - pair[0].1;
            if step == scheme.match_score() {
                Ok(true)
            } else if step == -scheme.mismatch_penalty() {
                Ok(false)
            } else {
                Err(Error::InvalidWalk(format!(
                    "step (1, {step}) at abscissa {} is neither a match nor a mismatch under {scheme}",
                    pair[0].0
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Alignment::from_letters(letters)
}

/// Homogeneity by the culminating-positive-walk criterion: every prefix score is
/// positive and every proper prefix score is strictly below the total.
pub fn is_homogeneous(alignment: &Alignment, scheme: &ScoringScheme) -> bool {
    let total = score(alignment, scheme);
    let n = alignment.len();
    let mut y = 0;
    for (k, letter) in alignment.letters().enumerate() {
        y += scheme.letter_score(letter);
        if y <= 0 || (k + 1 < n && y >= total) {
            return false;
        }
    }
    true
}

/// Homogeneity by literal scan of every proper contiguous segment, O(n^2).
///
/// The whole alignment must also score above zero (the score of the empty
/// segment), which makes this agree with [`is_homogeneous`] for every length.
pub fn is_homogeneous_by_segments(alignment: &Alignment, scheme: &ScoringScheme) -> bool {
    let n = alignment.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0i64);
    for letter in alignment.letters() {
        prefix.push(prefix.last().unwrap() + scheme.letter_score(letter));
    }
    let total = prefix[n];
    if total <= 0 {
        return false;
    }
    for i in 1..=n {
        for j in i..=n {
            if (i > 1 || j < n) && prefix[j] - prefix[i - 1] >= total {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(text: &str) -> Alignment {
        text.parse().unwrap()
    }

    #[test]
    fn scores() {
        let blast = ScoringScheme::BLAST;
        assert_eq!(score(&a("11111"), &blast), 5);
        assert_eq!(score(&a("10110"), &blast), -3);
        // 11 matches, 7 mismatches
        assert_eq!(score(&a("110100110010101111"), &blast), -10);
    }

    #[test]
    fn walks() {
        let blast = ScoringScheme::BLAST;
        assert_eq!(to_walk(&a("11"), &blast).points(), &[(0, 0), (1, 1), (2, 2)]);
        assert_eq!(to_walk(&a("10"), &blast).points(), &[(0, 0), (1, 1), (2, -2)]);
        let x = a("1101001");
        assert_eq!(from_walk(&to_walk(&x, &blast), &blast).unwrap(), x);
    }

    #[test]
    fn from_walk_rejects_foreign_steps() {
        let walk = Walk::from_points(vec![(0, 0), (1, 1), (2, 0)]).unwrap();
        assert!(from_walk(&walk, &ScoringScheme::BLAST).is_err());
        assert!(Walk::from_points(vec![(0, 1), (1, 2)]).is_err());
        assert!(Walk::from_points(vec![(0, 0), (2, 1)]).is_err());
        assert!(Walk::from_points(vec![(0, 0)]).is_err());
    }

    #[test]
    fn homogeneity_examples() {
        let unit = ScoringScheme::new(1, 1).unwrap();
        for scheme in [unit, ScoringScheme::BLAST] {
            assert!(!is_homogeneous(&a("110"), &scheme));
            assert!(!is_homogeneous_by_segments(&a("110"), &scheme));
            assert!(!is_homogeneous(&a("0"), &scheme));
            assert!(!is_homogeneous_by_segments(&a("0"), &scheme));
        }
        assert!(is_homogeneous(&a("11011"), &unit));
        assert!(is_homogeneous_by_segments(&a("11011"), &unit));
        assert!(!is_homogeneous(&a("11011"), &ScoringScheme::BLAST));
    }

    #[test]
    fn segment_and_walk_criteria_agree_exhaustively() {
        for (s, p) in [(1, 1), (1, 3), (2, 3)] {
            let scheme = ScoringScheme::new(s, p).unwrap();
            for n in 1..=14 {
                for mask in 0..(1u64 << n) {
                    let x = Alignment::from_mask(n, mask).unwrap();
                    assert_eq!(
                        is_homogeneous(&x, &scheme),
                        is_homogeneous_by_segments(&x, &scheme),
                        "{x} under {scheme}"
                    );
                }
            }
        }
    }

    #[test]
    fn windows_cross_word_boundaries() {
        let text: String = (0..150).map(|i| if (i * 7) % 5 < 2 { '1' } else { '0' }).collect();
        let x = a(&text);
        for start in [0, 1, 60, 63, 64, 70, 100] {
            for width in [1, 5, 33, 64] {
                if start + width > x.len() {
                    continue;
                }
                let expected = (0..width)
                    .filter(|&j| x.get(start + j))
                    .fold(0u64, |acc, j| acc | (1 << j));
                assert_eq!(x.window(start, width), expected, "start {start} width {width}");
            }
        }
    }

    #[test]
    fn parse_rejects_junk() {
        assert!("".parse::<Alignment>().is_err());
        assert!("1012".parse::<Alignment>().is_err());
        assert_eq!(a("0110").to_string(), "0110");
    }

    proptest! {
        #[test]
        fn walk_round_trip(letters in prop::collection::vec(any::<bool>(), 1..=64), s in 1i64..4, p in 1i64..5) {
            let scheme = ScoringScheme::new(s, p).unwrap();
            let x = Alignment::from_letters(letters).unwrap();
            let walk = to_walk(&x, &scheme);
            prop_assert_eq!(walk.end().1, score(&x, &scheme));
            prop_assert_eq!(from_walk(&walk, &scheme).unwrap(), x);
        }
    }
}
