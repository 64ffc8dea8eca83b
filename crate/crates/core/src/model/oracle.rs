//! Brute-force enumeration used as ground truth by the test suites.

use crate::error::{Error, Result};
use crate::model::{is_homogeneous, score, Alignment, ScoringScheme};

/// Default cap on the length of exhaustively enumerated alignments.
pub const ORACLE_LIMIT: usize = 20;

/// Every alignment of length `n` in lexicographic order, filtered by `keep`.
fn enumerate_filtered<F>(n: usize, limit: usize, keep: F) -> Result<Vec<Alignment>>
where
    F: Fn(&Alignment) -> bool,
{
    if n == 0 {
        return Err(Error::EmptyLength);
    }
    if n > limit || n > 63 {
        return Err(Error::OracleLimit { n, limit });
    }
    let mut out = Vec::new();
    for value in 0u64..(1 << n) {
        // The most significant bit of `value` is the first letter, so counting
        // up walks the 0/1 strings in lexicographic order.
        let mask = value.reverse_bits() >> (64 - n);
        let alignment = Alignment::from_mask(n, mask)?;
        if keep(&alignment) {
            out.push(alignment);
        }
    }
    Ok(out)
}

pub fn enumerate_homogeneous(
    scheme: &ScoringScheme,
    n: usize,
    target: Option<i64>,
) -> Result<Vec<Alignment>> {
    enumerate_homogeneous_with_limit(scheme, n, target, ORACLE_LIMIT)
}

pub fn enumerate_homogeneous_with_limit(
    scheme: &ScoringScheme,
    n: usize,
    target: Option<i64>,
    limit: usize,
) -> Result<Vec<Alignment>> {
    enumerate_filtered(n, limit, |x| {
        target.is_none_or(|t| score(x, scheme) == t) && is_homogeneous(x, scheme)
    })
}

/// Every alignment of length `n` and score `target`, homogeneous or not.
pub fn enumerate_fixed_score(
    scheme: &ScoringScheme,
    n: usize,
    target: i64,
) -> Result<Vec<Alignment>> {
    enumerate_filtered(n, ORACLE_LIMIT, |x| score(x, scheme) == target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(v: &[Alignment]) -> Vec<String> {
        v.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn examples() {
        let unit = ScoringScheme::new(1, 1).unwrap();
        assert_eq!(texts(&enumerate_homogeneous(&unit, 5, Some(3)).unwrap()), ["11011"]);
        assert_eq!(
            texts(&enumerate_homogeneous(&ScoringScheme::BLAST, 2, Some(2)).unwrap()),
            ["11"]
        );
        for scheme in [unit, ScoringScheme::BLAST] {
            assert_eq!(
                texts(&enumerate_homogeneous(&scheme, 1, Some(scheme.match_score())).unwrap()),
                ["1"]
            );
        }
        assert_eq!(
            texts(&enumerate_homogeneous(&unit, 5, None).unwrap()),
            ["11011", "11111"]
        );
    }

    #[test]
    fn rejects_long_lengths() {
        assert!(matches!(
            enumerate_homogeneous(&ScoringScheme::BLAST, 21, None),
            Err(Error::OracleLimit { n: 21, .. })
        ));
        assert!(enumerate_homogeneous(&ScoringScheme::BLAST, 0, None).is_err());
    }

    #[test]
    fn output_is_sorted_and_bracketed_by_matches() {
        for (s, p) in [(1, 1), (1, 3), (2, 3)] {
            let scheme = ScoringScheme::new(s, p).unwrap();
            for n in 1..=14 {
                let all = enumerate_homogeneous(&scheme, n, None).unwrap();
                assert!(all.windows(2).all(|w| w[0] < w[1]));
                for x in &all {
                    assert!(x.get(0) && x.get(n - 1), "{x}");
                }
            }
        }
    }

    #[test]
    fn fixed_score_enumeration_is_binomial() {
        let all = enumerate_fixed_score(&ScoringScheme::BLAST, 10, 2).unwrap();
        // 4m = 2 + 30 -> m = 8, q = 2
        assert_eq!(all.len(), 45);
    }
}
