//! Exact counting of culminating positive walks (homogeneous alignments).
//!
//! Two table families are provided. [`CountTableD`] counts suffixes of walks
//! that must culminate at a fixed score `S`; it is an `S x n` table.
//! [`CountTableC`] counts suffixes of walks with a free final score, indexed by
//! current ordinate, running maximum and remaining steps.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::ScoringScheme;

/// Largest horizon accepted by [`CountTableC::build`]. The reachable part of
/// the `(y, h, k)` cube grows roughly cubically in `n`.
pub const C_TABLE_MAX_HORIZON: usize = 512;

/// Numbers of match and mismatch letters of an alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Composition {
    pub matches: usize,
    pub mismatches: usize,
}

impl Composition {
    pub fn len(&self) -> usize {
        self.matches + self.mismatches
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The unique `(matches, mismatches)` split of `n` letters scoring `score`, if any.
pub fn feasible_composition(scheme: &ScoringScheme, n: usize, score: i64) -> Option<Composition> {
    let numerator = score + n as i64 * scheme.mismatch_penalty();
    let denominator = scheme.match_score() + scheme.mismatch_penalty();
    if numerator < 0 || numerator % denominator != 0 {
        return None;
    }
    let matches = (numerator / denominator) as usize;
    (matches <= n).then(|| Composition {
        matches,
        mismatches: n - matches,
    })
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Suffix counts `|D^S_{y,k}|`: walks of `k` steps from ordinate `y` that end
/// exactly at `S` and keep every intermediate ordinate strictly inside `(0, S)`.
#[derive(Debug, Clone)]
pub struct CountTableD {
    scheme: ScoringScheme,
    target: i64,
    horizon: usize,
    // rows[k - 1][y] for k in 1..=horizon, y in 0..target
    rows: Vec<Vec<BigUint>>,
    zero: BigUint,
}

impl CountTableD {
    pub fn build(scheme: &ScoringScheme, target: i64, horizon: usize) -> Result<Self> {
        if target < 1 {
            return Err(Error::InfeasibleScore {
                n: horizon,
                score: target,
            });
        }
        if horizon == 0 {
            return Err(Error::EmptyLength);
        }
        let s = scheme.match_score();
        let p = scheme.mismatch_penalty();
        let width = target as usize;
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(horizon);

        let base = (0..target)
            .map(|y| if y + s == target { BigUint::one() } else { BigUint::zero() })
            .collect();
        rows.push(base);

        for _ in 2..=horizon {
            let prev = rows.last().unwrap();
            let mut row = vec![BigUint::zero(); width];
            for (y, cell) in row.iter_mut().enumerate() {
                let y = y as i64;
                // A match step must stay below the target unless it is the last
                // step; a mismatch step must stay positive.
                if y + s < target {
                    *cell += &prev[(y + s) as usize];
                }
                if y - p > 0 {
                    *cell += &prev[(y - p) as usize];
                }
            }
            rows.push(row);
        }

        Ok(Self {
            scheme: *scheme,
            target,
            horizon,
            rows,
            zero: BigUint::zero(),
        })
    }

    pub fn scheme(&self) -> &ScoringScheme {
        &self.scheme
    }

    pub fn target(&self) -> i64 {
        self.target
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// `|D^S_{y,k}|`; zero outside `0 <= y < S`, `1 <= k <= horizon`.
    pub fn count(&self, y: i64, k: usize) -> &BigUint {
        if k == 0 || k > self.horizon || y < 0 || y >= self.target {
            return &self.zero;
        }
        &self.rows[k - 1][y as usize]
    }

    /// Number of homogeneous alignments of `k` letters scoring exactly `S`.
    pub fn whole(&self, k: usize) -> &BigUint {
        self.count(0, k)
    }
}

/// Counts `|C_{y,h,k}|` of `(h, y)`-initialized culminating positive walks of
/// `k` steps, memoized over the states reachable from `(0, 0, horizon)`.
#[derive(Debug, Clone)]
pub struct CountTableC {
    scheme: ScoringScheme,
    horizon: usize,
    memo: HashMap<(i64, i64, usize), BigUint>,
}

impl CountTableC {
    pub fn build(scheme: &ScoringScheme, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::EmptyLength);
        }
        if horizon > C_TABLE_MAX_HORIZON {
            return Err(Error::HorizonTooLarge {
                n: horizon,
                limit: C_TABLE_MAX_HORIZON,
            });
        }
        let mut memo = HashMap::new();
        fill_c(scheme, 0, 0, horizon, &mut memo);
        Ok(Self {
            scheme: *scheme,
            horizon,
            memo,
        })
    }

    pub fn scheme(&self) -> &ScoringScheme {
        &self.scheme
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Number of memoized states.
    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// `|C_{y,h,k}|`. States outside the reachable set are evaluated on demand
    /// without being stored.
    pub fn count(&self, y: i64, h: i64, k: usize) -> BigUint {
        if k == 0 || y < 0 || y > h {
            return BigUint::zero();
        }
        if let Some(v) = self.memo.get(&(y, h, k)) {
            return v.clone();
        }
        fill_c(&self.scheme, y, h, k, &mut HashMap::new())
    }

    /// Number of homogeneous alignments of length `horizon`, any score.
    pub fn whole(&self) -> BigUint {
        self.count(0, 0, self.horizon)
    }
}

fn fill_c(
    scheme: &ScoringScheme,
    y: i64,
    h: i64,
    k: usize,
    memo: &mut HashMap<(i64, i64, usize), BigUint>,
) -> BigUint {
    if let Some(v) = memo.get(&(y, h, k)) {
        return v.clone();
    }
    let s = scheme.match_score();
    let p = scheme.mismatch_penalty();
    let value = if k == 1 {
        if y + s > h {
            BigUint::one()
        } else {
            BigUint::zero()
        }
    } else {
        let mut v = fill_c(scheme, y + s, h.max(y + s), k - 1, memo);
        if y > p {
            v += fill_c(scheme, y - p, h, k - 1, memo);
        }
        v
    };
    memo.insert((y, h, k), value.clone());
    value
}

/// Exact number of homogeneous alignments of length `n`, optionally with fixed score.
pub fn count_homogeneous(scheme: &ScoringScheme, n: usize, target: Option<i64>) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::EmptyLength);
    }
    match target {
        Some(score) => {
            if score < 1 || feasible_composition(scheme, n, score).is_none() {
                return Ok(BigUint::zero());
            }
            Ok(CountTableD::build(scheme, score, n)?.whole(n).clone())
        }
        None => Ok(CountTableC::build(scheme, n)?.whole()),
    }
}

/// Number of all alignments of length `n` scoring `score`: `binomial(n, matches)`.
pub fn count_unconstrained(scheme: &ScoringScheme, n: usize, score: i64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::EmptyLength);
    }
    Ok(feasible_composition(scheme, n, score)
        .map(|c| binomial(n, c.matches))
        .unwrap_or_else(BigUint::zero))
}

/// Forward counts of band-constrained prefix walks: `out[i][y]` is the number
/// of walks from `(0, 0)` to `(i, y)` whose points `1..=i` lie strictly inside
/// `(0, target)`. Reflecting such a walk maps it onto a `D` suffix, so
/// `out[i][y] == |D^S_{S-y,i}|` for `i >= 1`.
pub fn forward_band_counts(scheme: &ScoringScheme, target: i64, horizon: usize) -> Vec<Vec<BigUint>> {
    let width = target.max(0) as usize;
    let s = scheme.match_score();
    let p = scheme.mismatch_penalty();
    let mut out = Vec::with_capacity(horizon + 1);
    let mut origin = vec![BigUint::zero(); width.max(1)];
    origin[0] = BigUint::one();
    out.push(origin);
    for i in 1..=horizon {
        let prev: &Vec<BigUint> = &out[i - 1];
        let mut row = vec![BigUint::zero(); width.max(1)];
        for y in 1..target {
            let mut v = BigUint::zero();
            if y - s >= 0 && ((y - s) > 0 || i == 1) {
                v += &prev[(y - s) as usize];
            }
            if y + p < target && i > 1 {
                v += &prev[(y + p) as usize];
            }
            row[y as usize] = v;
        }
        out.push(row);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::oracle::{enumerate_fixed_score, enumerate_homogeneous};

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn unit() -> ScoringScheme {
        ScoringScheme::new(1, 1).unwrap()
    }

    #[test]
    fn compositions() {
        let blast = ScoringScheme::BLAST;
        assert_eq!(
            feasible_composition(&blast, 40, 12),
            Some(Composition {
                matches: 33,
                mismatches: 7
            })
        );
        assert_eq!(feasible_composition(&blast, 5, 2), None);
        assert_eq!(feasible_composition(&blast, 3, 10), None);
        assert_eq!(feasible_composition(&blast, 3, -10), None);
        for n in 1..10 {
            let c = feasible_composition(&unit(), n, n as i64).unwrap();
            assert_eq!((c.matches, c.mismatches), (n, 0));
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(40, 7), big(18_643_560));
        assert_eq!(binomial(5, 0), big(1));
        assert_eq!(binomial(5, 6), big(0));
        assert_eq!(binomial(100, 50).to_string(), "100891344545564193334812497256");
    }

    #[test]
    fn d_table_examples() {
        // The literal four-way case split of the recurrence would give 0 here.
        let t = CountTableD::build(&ScoringScheme::BLAST, 2, 2).unwrap();
        assert_eq!(t.count(0, 2), &big(1));
        let t = CountTableD::build(&unit(), 3, 5).unwrap();
        assert_eq!(t.count(0, 5), &big(1));
        for n in 1..12 {
            let t = CountTableD::build(&ScoringScheme::BLAST, n as i64, n).unwrap();
            assert_eq!(t.whole(n), &big(1));
        }
        assert_eq!(t.count(-1, 3), &big(0));
        assert_eq!(t.count(0, 0), &big(0));
    }

    #[test]
    fn c_table_examples() {
        for scheme in [unit(), ScoringScheme::BLAST, ScoringScheme::new(2, 3).unwrap()] {
            let t = CountTableC::build(&scheme, 1).unwrap();
            assert_eq!(t.count(0, 0, 1), big(1));
        }
        assert_eq!(CountTableC::build(&unit(), 5).unwrap().whole(), big(2));
        assert_eq!(CountTableC::build(&ScoringScheme::BLAST, 3).unwrap().whole(), big(1));
        assert!(CountTableC::build(&unit(), C_TABLE_MAX_HORIZON + 1).is_err());
    }

    #[test]
    fn c_table_off_memo_queries() {
        let t = CountTableC::build(&unit(), 6).unwrap();
        let fresh = CountTableC::build(&unit(), 9).unwrap();
        // (5, 7, 4) is not reachable from (0, 0, 6) but is still a valid query.
        assert_eq!(t.count(5, 7, 4), fresh.count(5, 7, 4));
        assert_eq!(t.count(3, 2, 2), big(0));
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_homogeneous(&unit(), 5, Some(3)).unwrap(), big(1));
        assert_eq!(count_homogeneous(&unit(), 5, None).unwrap(), big(2));
        assert_eq!(count_homogeneous(&ScoringScheme::BLAST, 5, Some(2)).unwrap(), big(0));
        assert_eq!(count_homogeneous(&ScoringScheme::BLAST, 5, Some(-3)).unwrap(), big(0));
        assert_eq!(
            count_unconstrained(&ScoringScheme::BLAST, 40, 12).unwrap(),
            big(18_643_560)
        );
        assert_eq!(count_unconstrained(&ScoringScheme::BLAST, 7, 7).unwrap(), big(1));
        assert_eq!(count_unconstrained(&ScoringScheme::BLAST, 5, 2).unwrap(), big(0));
    }

    #[test]
    fn counts_match_enumeration() {
        for (s, p) in [(1, 1), (1, 3), (2, 3)] {
            let scheme = ScoringScheme::new(s, p).unwrap();
            for n in 1..=12 {
                let free = enumerate_homogeneous(&scheme, n, None).unwrap();
                assert_eq!(count_homogeneous(&scheme, n, None).unwrap(), big(free.len() as u64));
                let mut partition = BigUint::zero();
                for score in -(p * n as i64)..=(s * n as i64) {
                    let expected = enumerate_homogeneous(&scheme, n, Some(score)).unwrap().len();
                    let got = count_homogeneous(&scheme, n, Some(score)).unwrap();
                    assert_eq!(got, big(expected as u64), "n {n} S {score} under {scheme}");
                    partition += got;
                    let all = enumerate_fixed_score(&scheme, n, score).unwrap().len();
                    assert_eq!(count_unconstrained(&scheme, n, score).unwrap(), big(all as u64));
                }
                assert_eq!(partition, big(free.len() as u64));
            }
        }
    }

    #[test]
    fn flip_identity() {
        for (s, p) in [(1, 1), (1, 3), (2, 3)] {
            let scheme = ScoringScheme::new(s, p).unwrap();
            for target in 1..=20 {
                let n = 14;
                let d = CountTableD::build(&scheme, target, n).unwrap();
                let forward = forward_band_counts(&scheme, target, n);
                for i in 1..=n {
                    for y in 1..target {
                        assert_eq!(
                            &forward[i][y as usize],
                            d.count(target - y, i),
                            "i {i} y {y} S {target} under {scheme}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn counts_exceed_u64_for_long_walks() {
        let c = CountTableC::build(&unit(), 90).unwrap();
        assert!(c.whole() > BigUint::from(u64::MAX));
        let d = CountTableD::build(&unit(), 10, 90).unwrap();
        assert!(d.whole(90) > &BigUint::from(u64::MAX));
    }
}
