//! Exhaustive search for the most sensitive spaced seed of a given weight.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::count::binomial;
use crate::error::{Error, Result};
use crate::model::{DetectionStrategy, ScoringScheme, Seed, MAX_SPAN};
use crate::sensitivity::{AlignmentModel, SensitivityEngine};

/// Default upper bound on the span of enumerated seeds.
pub const DEFAULT_MAX_SPAN: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub weight: usize,
    pub max_span: usize,
    pub scheme: ScoringScheme,
    pub length: usize,
    pub score: i64,
    pub model: AlignmentModel,
    pub top_k: usize,
}

impl SearchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.weight < 2 {
            return Err(Error::InvalidSearch(format!("weight {} must be at least 2", self.weight)));
        }
        if self.weight > self.max_span {
            return Err(Error::InvalidSearch(format!(
                "weight {} exceeds max span {}",
                self.weight, self.max_span
            )));
        }
        if self.max_span > MAX_SPAN {
            return Err(Error::InvalidSearch(format!(
                "max span {} exceeds {MAX_SPAN}",
                self.max_span
            )));
        }
        if self.top_k == 0 {
            return Err(Error::InvalidSearch("top_k must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedSeed {
    pub seed: Seed,
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl RankedSeed {
    pub fn probability(&self) -> Ratio<BigUint> {
        Ratio::new(self.numerator.clone(), self.denominator.clone())
    }
}

#[derive(Debug, Clone)]
pub struct RankedSeeds {
    /// Best first; ties broken by ascending pattern text.
    pub seeds: Vec<RankedSeed>,
    pub candidates: usize,
    pub elapsed: Duration,
}

/// Number of canonical seeds of weight `weight` and span in `[weight, max_span]`.
pub fn seed_count(weight: usize, max_span: usize) -> BigUint {
    if weight == 1 {
        return BigUint::from((max_span >= 1) as u32);
    }
    (weight..=max_span).map(|span| binomial(span - 2, weight - 2)).sum()
}

/// Canonical seeds ordered by span, then lexicographically.
pub fn enumerate_seeds(weight: usize, max_span: usize) -> impl Iterator<Item = Seed> {
    let max_span = max_span.min(MAX_SPAN);
    (weight.max(2)..=max_span)
        .filter(move |_| weight >= 2)
        .flat_map(move |span| {
            let inner = span - 2;
            let ones = weight - 2;
            // Interior read most-significant-bit first, so increasing values
            // are increasing strings.
            InteriorPatterns::new(inner, ones).map(move |interior| {
                let pattern: Vec<bool> = std::iter::once(true)
                    .chain((0..inner).rev().map(|b| (interior >> b) & 1 == 1))
                    .chain(std::iter::once(true))
                    .collect();
                Seed::from_pattern(&pattern).expect("canonical by construction")
            })
        })
}

/// `width`-bit values with exactly `ones` bits set, ascending.
struct InteriorPatterns {
    next: Option<u64>,
    limit: u64,
}

impl InteriorPatterns {
    fn new(width: usize, ones: usize) -> Self {
        let next = (ones <= width).then(|| if ones == 0 { 0 } else { (1u64 << ones) - 1 });
        Self {
            next,
            limit: 1u64 << width,
        }
    }
}

impl Iterator for InteriorPatterns {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let current = self.next?;
        self.next = if current == 0 {
            None
        } else {
            // Gosper's hack: next larger value with the same popcount.
            let low = current & current.wrapping_neg();
            let ripple = current + low;
            let following = (((ripple ^ current) >> 2) / low) | ripple;
            (following < self.limit).then_some(following)
        };
        Some(current)
    }
}

fn rank_order(a: &RankedSeed, b: &RankedSeed) -> Ordering {
    b.numerator
        .cmp(&a.numerator)
        .then_with(|| a.seed.as_str().cmp(b.seed.as_str()))
}

/// Evaluates every candidate seed in parallel and keeps the `top_k` best.
pub fn find_optimal(spec: &SearchSpec) -> Result<RankedSeeds> {
    spec.validate()?;
    let start = Instant::now();
    let engine = SensitivityEngine::new(&spec.scheme, spec.length, spec.score, spec.model)?;
    let candidates: Vec<Seed> = enumerate_seeds(spec.weight, spec.max_span).collect();
    let denominator = engine.denominator().clone();
    let mut scored: Vec<RankedSeed> = candidates
        .par_iter()
        .map(|seed| RankedSeed {
            numerator: engine.hit_count(&DetectionStrategy::single(seed.clone())),
            denominator: denominator.clone(),
            seed: seed.clone(),
        })
        .collect();
    scored.sort_by(rank_order);
    scored.truncate(spec.top_k);
    Ok(RankedSeeds {
        seeds: scored,
        candidates: candidates.len(),
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensitivity::{hit_probability, SensitivityQuery};

    fn names(weight: usize, max_span: usize) -> Vec<String> {
        enumerate_seeds(weight, max_span).map(|s| s.to_string()).collect()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(names(2, 3), ["11", "101"]);
        assert_eq!(names(3, 4), ["111", "1011", "1101"]);
        assert_eq!(enumerate_seeds(9, 15).count(), 3003);
        assert!(names(4, 3).is_empty());
    }

    #[test]
    fn enumeration_counts_match_binomial_sums() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let weight = rng.gen_range(2..=8);
            let max_span = rng.gen_range(weight..=16);
            let seeds: Vec<Seed> = enumerate_seeds(weight, max_span).collect();
            assert_eq!(BigUint::from(seeds.len()), seed_count(weight, max_span));
            assert!(seeds.iter().all(|s| s.weight() == weight));
            assert!(seeds.windows(2).all(|w| (w[0].span(), w[0].as_str()) < (w[1].span(), w[1].as_str())));
            assert_eq!(seeds[0], Seed::contiguous(weight).unwrap());
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = SearchSpec {
            weight: 1,
            max_span: 5,
            scheme: ScoringScheme::BLAST,
            length: 20,
            score: 8,
            model: AlignmentModel::Homogeneous,
            top_k: 3,
        };
        assert!(find_optimal(&spec).is_err());
        spec.weight = 6;
        assert!(find_optimal(&spec).is_err());
        spec.weight = 3;
        spec.top_k = 0;
        assert!(find_optimal(&spec).is_err());
        spec.top_k = 3;
        spec.score = 9;
        assert!(matches!(find_optimal(&spec), Err(Error::InfeasibleScore { .. })));
    }

    #[test]
    fn ranking_is_reproducible() {
        let spec = SearchSpec {
            weight: 4,
            max_span: 8,
            scheme: ScoringScheme::BLAST,
            length: 24,
            score: 8,
            model: AlignmentModel::Homogeneous,
            top_k: 10,
        };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = one.install(|| find_optimal(&spec)).unwrap();
        let parallel = find_optimal(&spec).unwrap();
        assert_eq!(serial.seeds, parallel.seeds);
        assert_eq!(serial.candidates, 1 + 3 + 6 + 10 + 15);
        for pair in serial.seeds.windows(2) {
            assert_ne!(rank_order(&pair[0], &pair[1]), Ordering::Greater);
        }
        for ranked in &serial.seeds {
            let direct = hit_probability(&SensitivityQuery::single(
                ranked.seed.clone(),
                spec.scheme,
                spec.length,
                spec.score,
                spec.model,
            ))
            .unwrap();
            assert_eq!(direct.numerator, ranked.numerator);
        }
    }
}
