//! Uniform random generation of homogeneous alignments.
//!
//! Alignments are drawn letter by letter, left to right. At each step the
//! match branch is taken with probability `matches / (matches + mismatches)`,
//! where the two counts are the numbers of valid completions after each
//! choice. The product of these ratios telescopes to `1 / |L_n|`, so every
//! member of the target set is equally likely. Branches are chosen by
//! drawing an integer uniformly below the total count, so no floating-point
//! rounding enters the distribution.
//!
//! Randomness comes from ChaCha20 ([`rand_chacha::ChaCha20Rng`]) seeded with
//! `seed_from_u64`. Parallel generation splits work into fixed blocks of
//! [`BLOCK_SIZE`] samples; block `b` uses the ChaCha stream number `b` of the
//! same key, so the output does not depend on the number of threads.

use num_bigint::{BigUint, RandBigInt};
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::count::{feasible_composition, CountTableC, CountTableD};
use crate::error::{Error, Result};
use crate::model::oracle::ORACLE_LIMIT;
use crate::model::{is_homogeneous, score, Alignment, ScoringScheme};

/// Number of samples generated from one derived stream in parallel generation.
pub const BLOCK_SIZE: usize = 1024;

/// Default attempt budget of [`sample_rejection`].
pub const DEFAULT_REJECTION_BUDGET: u64 = 10_000_000;

/// Seeded, reproducible random source.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha20Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `index` derived from `seed`.
    pub fn derive(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self { seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn below(&mut self, bound: &BigUint) -> BigUint {
        self.rng.gen_biguint_below(bound)
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

/// Position of a partially generated walk in the fixed-score table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedState {
    pub remaining: usize,
    pub ordinate: i64,
}

/// Position of a partially generated walk in the free-score table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeState {
    pub remaining: usize,
    pub ordinate: i64,
    pub maximum: i64,
}

/// Suffix counts that drive letter-by-letter generation.
pub trait SuffixCounts {
    type State: Copy + std::fmt::Debug;

    fn root(&self) -> Self::State;

    /// Completion counts after a match and after a mismatch.
    fn branches(&self, state: &Self::State) -> (BigUint, BigUint);

    fn advance(&self, state: &Self::State, is_match: bool) -> Self::State;
}

impl SuffixCounts for CountTableD {
    type State = FixedState;

    fn root(&self) -> FixedState {
        FixedState {
            remaining: self.horizon(),
            ordinate: 0,
        }
    }

    fn branches(&self, state: &FixedState) -> (BigUint, BigUint) {
        let s = self.scheme().match_score();
        let p = self.scheme().mismatch_penalty();
        let (k, y) = (state.remaining, state.ordinate);
        if k == 0 {
            return (BigUint::zero(), BigUint::zero());
        }
        if k == 1 {
            let m = if y + s == self.target() { BigUint::one() } else { BigUint::zero() };
            return (m, BigUint::zero());
        }
        let m = if y + s < self.target() {
            self.count(y + s, k - 1).clone()
        } else {
            BigUint::zero()
        };
        let q = if y - p > 0 {
            self.count(y - p, k - 1).clone()
        } else {
            BigUint::zero()
        };
        (m, q)
    }

    fn advance(&self, state: &FixedState, is_match: bool) -> FixedState {
        FixedState {
            remaining: state.remaining - 1,
            ordinate: state.ordinate + self.scheme().letter_score(is_match),
        }
    }
}

impl SuffixCounts for CountTableC {
    type State = FreeState;

    fn root(&self) -> FreeState {
        FreeState {
            remaining: self.horizon(),
            ordinate: 0,
            maximum: 0,
        }
    }

    fn branches(&self, state: &FreeState) -> (BigUint, BigUint) {
        let s = self.scheme().match_score();
        let p = self.scheme().mismatch_penalty();
        let (k, y, h) = (state.remaining, state.ordinate, state.maximum);
        if k == 0 {
            return (BigUint::zero(), BigUint::zero());
        }
        if k == 1 {
            let m = if y + s > h { BigUint::one() } else { BigUint::zero() };
            return (m, BigUint::zero());
        }
        let m = self.count(y + s, h.max(y + s), k - 1);
        let q = if y > p {
            self.count(y - p, h, k - 1)
        } else {
            BigUint::zero()
        };
        (m, q)
    }

    fn advance(&self, state: &FreeState, is_match: bool) -> FreeState {
        let ordinate = state.ordinate + self.scheme().letter_score(is_match);
        FreeState {
            remaining: state.remaining - 1,
            ordinate,
            maximum: state.maximum.max(ordinate),
        }
    }
}

/// Exact probability that the next letter is a match.
pub fn next_letter_probability<T: SuffixCounts>(table: &T, state: &T::State) -> Result<Ratio<BigUint>> {
    let (m, q) = table.branches(state);
    let total = &m + &q;
    if total.is_zero() {
        return Err(Error::UnreachableState(format!("{state:?}")));
    }
    Ok(Ratio::new(m, total))
}

/// Draws one member uniformly. The root state must have completions.
pub fn draw<T: SuffixCounts>(table: &T, length: usize, stream: &mut RandomStream) -> Alignment {
    let mut state = table.root();
    let mut letters = Vec::with_capacity(length);
    for _ in 0..length {
        let (m, q) = table.branches(&state);
        let total = &m + &q;
        debug_assert!(!total.is_zero(), "walked into dead state {state:?}");
        let is_match = stream.below(&total) < m;
        letters.push(is_match);
        state = table.advance(&state, is_match);
    }
    Alignment::from_letters(letters).expect("length >= 1")
}

/// Uniform sampler over homogeneous alignments of fixed length and score.
#[derive(Debug, Clone)]
pub struct FixedScoreSampler {
    table: CountTableD,
    length: usize,
}

impl FixedScoreSampler {
    pub fn new(scheme: &ScoringScheme, length: usize, target: i64) -> Result<Self> {
        if length == 0 {
            return Err(Error::EmptyLength);
        }
        let infeasible = Error::InfeasibleScore {
            n: length,
            score: target,
        };
        if target < 1 || feasible_composition(scheme, length, target).is_none() {
            return Err(infeasible);
        }
        let table = CountTableD::build(scheme, target, length)?;
        if table.whole(length).is_zero() {
            return Err(infeasible);
        }
        Ok(Self { table, length })
    }

    pub fn table(&self) -> &CountTableD {
        &self.table
    }

    pub fn population(&self) -> &BigUint {
        self.table.whole(self.length)
    }

    pub fn draw(&self, stream: &mut RandomStream) -> Alignment {
        draw(&self.table, self.length, stream)
    }
}

/// Uniform sampler over homogeneous alignments of fixed length, any score.
#[derive(Debug, Clone)]
pub struct FreeScoreSampler {
    table: CountTableC,
}

impl FreeScoreSampler {
    pub fn new(scheme: &ScoringScheme, length: usize) -> Result<Self> {
        Ok(Self {
            table: CountTableC::build(scheme, length)?,
        })
    }

    pub fn table(&self) -> &CountTableC {
        &self.table
    }

    pub fn draw(&self, stream: &mut RandomStream) -> Alignment {
        draw(&self.table, self.table.horizon(), stream)
    }
}

pub fn sample_fixed(
    scheme: &ScoringScheme,
    length: usize,
    target: i64,
    count: usize,
    stream: &mut RandomStream,
) -> Result<Vec<Alignment>> {
    let sampler = FixedScoreSampler::new(scheme, length, target)?;
    Ok((0..count).map(|_| sampler.draw(stream)).collect())
}

pub fn sample_free(
    scheme: &ScoringScheme,
    length: usize,
    count: usize,
    stream: &mut RandomStream,
) -> Result<Vec<Alignment>> {
    let sampler = FreeScoreSampler::new(scheme, length)?;
    Ok((0..count).map(|_| sampler.draw(stream)).collect())
}

/// Uniform sample over all alignments of fixed length and score: the
/// mismatch positions form a uniform subset of the right size.
pub fn sample_unconstrained(
    scheme: &ScoringScheme,
    length: usize,
    target: i64,
    count: usize,
    stream: &mut RandomStream,
) -> Result<Vec<Alignment>> {
    let composition = feasible_composition(scheme, length, target).ok_or(Error::InfeasibleScore {
        n: length,
        score: target,
    })?;
    Ok((0..count)
        .map(|_| draw_unconstrained(length, composition.mismatches, stream))
        .collect())
}

pub(crate) fn draw_unconstrained(length: usize, mismatches: usize, stream: &mut RandomStream) -> Alignment {
    let mut letters = vec![true; length];
    for i in rand::seq::index::sample(stream, length, mismatches) {
        letters[i] = false;
    }
    Alignment::from_letters(letters).expect("length >= 1")
}

/// Runs `draw_one` `count` times in fixed blocks with derived streams and
/// returns results in block order, independent of the thread count.
pub fn generate_blocks<T, F>(seed: u64, count: usize, draw_one: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RandomStream) -> T + Sync,
{
    let blocks = count.div_ceil(BLOCK_SIZE);
    let chunks: Vec<Vec<T>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut stream = RandomStream::derive(seed, b as u64);
            let size = BLOCK_SIZE.min(count - b * BLOCK_SIZE);
            (0..size).map(|_| draw_one(&mut stream)).collect()
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

/// Rejection sampling oracle: uniform binary strings, kept if homogeneous
/// (and of the requested score). Exponentially slow for strict schemes.
pub fn sample_rejection(
    scheme: &ScoringScheme,
    length: usize,
    target: Option<i64>,
    count: usize,
    stream: &mut RandomStream,
    budget: u64,
) -> Result<Vec<Alignment>> {
    if length == 0 {
        return Err(Error::EmptyLength);
    }
    if length > ORACLE_LIMIT {
        return Err(Error::OracleLimit {
            n: length,
            limit: ORACLE_LIMIT,
        });
    }
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0u64;
    while out.len() < count {
        if attempts >= budget {
            return Err(Error::RejectionBudget { attempts });
        }
        attempts += 1;
        let mask = stream.gen::<u64>();
        let candidate = Alignment::from_mask(length, mask)?;
        if target.is_none_or(|t| score(&candidate, scheme) == t) && is_homogeneous(&candidate, scheme) {
            out.push(candidate);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn unit() -> ScoringScheme {
        ScoringScheme::new(1, 1).unwrap()
    }

    #[test]
    fn fixed_examples() {
        let mut stream = RandomStream::new(3);
        for x in sample_fixed(&unit(), 5, 3, 20, &mut stream).unwrap() {
            assert_eq!(x.to_string(), "11011");
        }
        for x in sample_fixed(&ScoringScheme::BLAST, 9, 9, 5, &mut stream).unwrap() {
            assert_eq!(x.to_string(), "111111111");
        }
        assert!(matches!(
            sample_fixed(&ScoringScheme::BLAST, 5, 2, 1, &mut stream),
            Err(Error::InfeasibleScore { n: 5, score: 2 })
        ));
    }

    #[test]
    fn free_examples() {
        let mut stream = RandomStream::new(9);
        for x in sample_free(&ScoringScheme::BLAST, 3, 10, &mut stream).unwrap() {
            assert_eq!(x.to_string(), "111");
        }
        for x in sample_free(&unit(), 1, 10, &mut stream).unwrap() {
            assert_eq!(x.to_string(), "1");
        }
        let mut tally: HashMap<String, usize> = HashMap::new();
        for x in sample_free(&unit(), 5, 4000, &mut stream).unwrap() {
            *tally.entry(x.to_string()).or_default() += 1;
        }
        assert_eq!(tally.len(), 2);
        // Binomial(4000, 1/2) has sd ~31.6; allow 5 sd.
        let ones = tally["11111"] as f64;
        assert!((ones - 2000.0).abs() < 160.0, "{tally:?}");
    }

    #[test]
    fn probabilities() {
        let t = CountTableD::build(&unit(), 3, 5).unwrap();
        let root = FixedState {
            remaining: 5,
            ordinate: 0,
        };
        assert_eq!(next_letter_probability(&t, &root).unwrap(), Ratio::from_integer(BigUint::one()));
        let inner = FixedState {
            remaining: 4,
            ordinate: 1,
        };
        let p = next_letter_probability(&t, &inner).unwrap();
        assert_eq!(p, Ratio::new(t.count(2, 3).clone(), t.count(1, 4).clone()));
        assert!(p <= Ratio::from_integer(BigUint::one()));

        let c = CountTableC::build(&unit(), 4).unwrap();
        let last = FreeState {
            remaining: 1,
            ordinate: 2,
            maximum: 2,
        };
        assert_eq!(next_letter_probability(&c, &last).unwrap(), Ratio::from_integer(BigUint::one()));

        let dead = FixedState {
            remaining: 2,
            ordinate: 2,
        };
        assert!(next_letter_probability(&t, &dead).is_err());
    }

    #[test]
    fn branch_counts_conserve_totals() {
        for (s, p) in [(1, 1), (1, 3), (2, 3)] {
            let scheme = ScoringScheme::new(s, p).unwrap();
            for target in 1..15 {
                let t = CountTableD::build(&scheme, target, 20).unwrap();
                for k in 1..=20 {
                    for y in 0..target {
                        let (m, q) = t.branches(&FixedState {
                            remaining: k,
                            ordinate: y,
                        });
                        assert_eq!(&(m + q), t.count(y, k));
                    }
                }
            }
            let c = CountTableC::build(&scheme, 16).unwrap();
            for k in 1..=16 {
                for h in 0..20 {
                    for y in 0..=h {
                        let (m, q) = c.branches(&FreeState {
                            remaining: k,
                            ordinate: y,
                            maximum: h,
                        });
                        assert_eq!(m + q, c.count(y, h, k));
                    }
                }
            }
        }
    }

    #[test]
    fn rejection_sampler() {
        let mut stream = RandomStream::new(1);
        for x in sample_rejection(&unit(), 5, Some(3), 5, &mut stream, 100_000).unwrap() {
            assert_eq!(x.to_string(), "11011");
        }
        assert!(matches!(
            sample_rejection(&ScoringScheme::BLAST, 5, Some(2), 1, &mut stream, 1000),
            Err(Error::RejectionBudget { attempts: 1000 })
        ));
        assert!(sample_rejection(&unit(), 21, None, 1, &mut stream, 10).is_err());
    }

    #[test]
    fn determinism() {
        let a = sample_fixed(&ScoringScheme::BLAST, 40, 12, 50, &mut RandomStream::new(42)).unwrap();
        let b = sample_fixed(&ScoringScheme::BLAST, 40, 12, 50, &mut RandomStream::new(42)).unwrap();
        assert_eq!(a, b);
        let sampler = FixedScoreSampler::new(&ScoringScheme::BLAST, 40, 12).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let x = one.install(|| generate_blocks(7, 3000, |s| sampler.draw(s)));
        let y = four.install(|| generate_blocks(7, 3000, |s| sampler.draw(s)));
        assert_eq!(x.len(), 3000);
        assert_eq!(x, y);
    }

    #[test]
    fn unconstrained_samples_have_the_right_score() {
        let mut stream = RandomStream::new(5);
        for x in sample_unconstrained(&ScoringScheme::BLAST, 40, 12, 200, &mut stream).unwrap() {
            assert_eq!(score(&x, &ScoringScheme::BLAST), 12);
        }
    }
}
