//! Exact hit probability of a detection strategy on fixed-length, fixed-score
//! alignments.
//!
//! The computation runs over states `(i, M, y, r)`: a prefix `B` of length `i`
//! ending at score `y`, followed by a remembered suffix `M`, with `r` seed
//! occurrences still required. `N(i, M, y, r)` is the number of admissible
//! prefixes `B` for which `B·M` contains the `r` occurrences. Growing `M` to
//! the left one letter at a time:
//!
//! * a state with `i + |M| < l` cannot contain a window and counts zero;
//! * when `M` reaches span `l` and the seed matches it, the occurrence is the
//!   rightmost one in `B·M`. With `r = 1` every prefix counts; otherwise the
//!   rightmost `l - ω` letters are cut off and the search continues with
//!   `r - 1`;
//! * when no window ending at the last letter of `M` can ever match (even if
//!   all letters to its left were matches), that letter is dropped.
//!
//! Only suffixes that survive the last rule are materialized, which bounds the
//! state set by `l · 2^(l - w) + 1`.
//!
//! Prefix admissibility and the prefix counts depend on the alignment model.
//! For homogeneous alignments the prefixes are walks from the origin whose
//! points stay strictly inside `(0, S)`; reflecting such a walk shows their
//! number equals the suffix count `|D^S_{S-y,i}|`. For the uniform model any
//! prefix with a composition that can still reach `(n, S)` is admissible and
//! there are `binomial(i, m)` of them. The hit probability is
//! `N(n, ε, S, K)` divided by the total number of alignments.

use std::fmt;
use std::ops::AddAssign;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::count::{binomial, feasible_composition, Composition, CountTableD};
use crate::decimal::render_ratio;
use crate::error::{Error, Result};
use crate::model::{strategy_detects, DetectionStrategy, ScoringScheme, Seed};
use crate::sample::{draw_unconstrained, generate_blocks, FixedScoreSampler, RandomStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlignmentModel {
    /// Uniform over homogeneous alignments of the given length and score.
    Homogeneous,
    /// Uniform over all alignments of the given length and score.
    UniformFixedScore,
}

impl AlignmentModel {
    pub fn name(&self) -> &'static str {
        match self {
            AlignmentModel::Homogeneous => "homogeneous",
            AlignmentModel::UniformFixedScore => "all",
        }
    }
}

impl fmt::Display for AlignmentModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A remembered alignment suffix. Bit `t` of `bits` is the letter `t`
/// positions before the end of the suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SuffixState {
    len: usize,
    bits: u64,
}

impl SuffixState {
    pub const EMPTY: SuffixState = SuffixState { len: 0, bits: 0 };

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    fn prepend(self, is_match: bool) -> Self {
        Self {
            len: self.len + 1,
            bits: self.bits | ((is_match as u64) << self.len),
        }
    }

    fn drop_last(self, count: usize) -> Self {
        Self {
            len: self.len - count,
            bits: if count >= 64 { 0 } else { self.bits >> count },
        }
    }
}

impl fmt::Display for SuffixState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in (0..self.len).rev() {
            f.write_str(if (self.bits >> t) & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Seed mask aligned to the right: bit `t` = pattern position `l - 1 - t`.
fn right_aligned_mask(seed: &Seed) -> u64 {
    seed.mask().reverse_bits() >> (64 - seed.span())
}

fn low_bits(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Whether `1^(l - |M|) M` is matched by the seed.
fn is_viable(required: u64, state: SuffixState) -> bool {
    (required & low_bits(state.len)) & !state.bits == 0
}

fn reduce(required: u64, mut state: SuffixState) -> SuffixState {
    while !is_viable(required, state) {
        state = state.drop_last(1);
    }
    state
}

/// Every suffix the recursion can hold for `seed`, including the full-span
/// windows the seed matches, in `(length, bits)` order.
pub fn viable_suffixes(seed: &Seed) -> Vec<SuffixState> {
    let required = right_aligned_mask(seed);
    let mut out = Vec::new();
    for len in 0..=seed.span() {
        let fixed = required & low_bits(len);
        let free = !required & low_bits(len);
        // enumerate subsets of the free positions
        let mut subset = 0u64;
        loop {
            out.push(SuffixState {
                len,
                bits: fixed | subset,
            });
            if subset == free {
                break;
            }
            subset = (subset.wrapping_sub(free)) & free;
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Continue(usize),
    /// The seed matched a full window; `rest` is the state left after cutting
    /// off the overlap-forbidden letters.
    Hit { rest: usize },
}

/// Transition structure over the viable suffixes shorter than the span.
#[derive(Debug, Clone)]
struct SuffixAutomaton {
    span: usize,
    lengths: Vec<usize>,
    steps: Vec<[Step; 2]>,
}

impl SuffixAutomaton {
    fn new(strategy: &DetectionStrategy) -> Self {
        let seed = strategy.seed();
        let span = seed.span();
        let required = right_aligned_mask(seed);
        let states: Vec<SuffixState> = viable_suffixes(seed).into_iter().filter(|s| s.len < span).collect();
        let index = |state: SuffixState| {
            states
                .binary_search(&state)
                .expect("reduced suffixes are viable")
        };
        let gap = strategy.min_gap();
        let steps = states
            .iter()
            .map(|&state| {
                [false, true].map(|letter| {
                    let grown = state.prepend(letter);
                    if grown.len == span && is_viable(required, grown) {
                        Step::Hit {
                            rest: index(reduce(required, grown.drop_last(gap))),
                        }
                    } else {
                        Step::Continue(index(reduce(required, grown)))
                    }
                })
            })
            .collect();
        debug_assert_eq!(states[0], SuffixState::EMPTY);
        Self {
            span,
            lengths: states.iter().map(|s| s.len).collect(),
            steps,
        }
    }

    fn len(&self) -> usize {
        self.steps.len()
    }
}

/// Counts of admissible prefixes `(i, m)`: length `i` with `m` matches.
///
/// Only compositions that can still be completed to the target are kept:
/// `max(0, i - Q) <= m <= min(i, M)` for a final composition `(M, Q)`.
#[derive(Debug, Clone)]
pub struct PrefixCounts {
    scheme: ScoringScheme,
    length: usize,
    score: i64,
    model: AlignmentModel,
    composition: Composition,
    rows: Vec<Vec<BigUint>>,
}

impl PrefixCounts {
    pub fn new(scheme: &ScoringScheme, length: usize, score: i64, model: AlignmentModel) -> Result<Self> {
        let infeasible = Error::InfeasibleScore { n: length, score };
        if length == 0 {
            return Err(Error::EmptyLength);
        }
        let composition = feasible_composition(scheme, length, score).ok_or(infeasible.clone())?;
        let mut rows = Vec::with_capacity(length + 1);
        match model {
            AlignmentModel::Homogeneous => {
                if score < 1 {
                    return Err(infeasible);
                }
                let table = CountTableD::build(scheme, score, length)?;
                for i in 0..=length {
                    let (lo, hi) = Self::range(composition, i);
                    let row: Vec<BigUint> = (lo..=hi)
                        .map(|m| {
                            let y = scheme.composition_score(m, i - m);
                            if i == 0 {
                                BigUint::from(1u32)
                            } else if i == length {
                                table.whole(length).clone()
                            } else if 0 < y && y < score {
                                table.count(score - y, i).clone()
                            } else {
                                BigUint::zero()
                            }
                        })
                        .collect();
                    rows.push(row);
                }
                #[cfg(debug_assertions)]
                {
                    let forward = crate::count::forward_band_counts(scheme, score, length);
                    for (i, row) in rows.iter().enumerate().take(length).skip(1) {
                        let lo = Self::range(composition, i).0;
                        for (j, value) in row.iter().enumerate() {
                            let y = scheme.composition_score(lo + j, i - lo - j);
                            let expected = if 0 < y && y < score {
                                forward[i][y as usize].clone()
                            } else {
                                BigUint::zero()
                            };
                            debug_assert_eq!(value, &expected, "reflected count mismatch at ({i}, {y})");
                        }
                    }
                }
            }
            AlignmentModel::UniformFixedScore => {
                for i in 0..=length {
                    let (lo, hi) = Self::range(composition, i);
                    rows.push((lo..=hi).map(|m| binomial(i, m)).collect());
                }
            }
        }
        let counts = Self {
            scheme: *scheme,
            length,
            score,
            model,
            composition,
            rows,
        };
        if counts.total().is_zero() {
            return Err(infeasible);
        }
        Ok(counts)
    }

    fn range(composition: Composition, i: usize) -> (usize, usize) {
        (i.saturating_sub(composition.mismatches), i.min(composition.matches))
    }

    pub fn scheme(&self) -> &ScoringScheme {
        &self.scheme
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn score(&self) -> i64 {
        self.score
    }

    pub fn model(&self) -> AlignmentModel {
        self.model
    }

    pub fn composition(&self) -> Composition {
        self.composition
    }

    /// Number of admissible prefixes of length `i` with `matches` matches.
    pub fn get(&self, i: usize, matches: usize) -> Option<&BigUint> {
        let (lo, hi) = Self::range(self.composition, i);
        (i <= self.length && lo <= matches && matches <= hi).then(|| &self.rows[i][matches - lo])
    }

    /// Total number of alignments in the model.
    pub fn total(&self) -> &BigUint {
        &self.rows[self.length][0]
    }
}

/// Integer type the recursion accumulates in.
trait Tally: Clone + Zero + for<'a> AddAssign<&'a Self> {
    fn from_big(value: &BigUint) -> Self;
    fn into_big(self) -> BigUint;
}

impl Tally for u128 {
    fn from_big(value: &BigUint) -> Self {
        value.to_u128().expect("prefix counts of length < 128 fit in u128")
    }

    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Tally for BigUint {
    fn from_big(value: &BigUint) -> Self {
        value.clone()
    }

    fn into_big(self) -> BigUint {
        self
    }
}

/// Prepared evaluator for one `(scheme, n, S, model)`; reusable across strategies.
#[derive(Debug, Clone)]
pub struct SensitivityEngine {
    prefixes: PrefixCounts,
}

impl SensitivityEngine {
    pub fn new(scheme: &ScoringScheme, length: usize, score: i64, model: AlignmentModel) -> Result<Self> {
        Ok(Self {
            prefixes: PrefixCounts::new(scheme, length, score, model)?,
        })
    }

    pub fn prefixes(&self) -> &PrefixCounts {
        &self.prefixes
    }

    pub fn denominator(&self) -> &BigUint {
        self.prefixes.total()
    }

    /// Number of alignments in the model detected by `strategy`.
    pub fn hit_count(&self, strategy: &DetectionStrategy) -> BigUint {
        // Every count is at most 2^n.
        if self.prefixes.length < 128 {
            self.run::<u128>(strategy)
        } else {
            self.run::<BigUint>(strategy)
        }
    }

    pub fn evaluate(&self, strategy: &DetectionStrategy) -> SensitivityReport {
        let p = &self.prefixes;
        SensitivityReport {
            query: SensitivityQuery {
                strategy: strategy.clone(),
                scheme: p.scheme,
                length: p.length,
                score: p.score,
                model: p.model,
            },
            numerator: self.hit_count(strategy),
            denominator: p.total().clone(),
        }
    }

    fn run<T: Tally>(&self, strategy: &DetectionStrategy) -> BigUint {
        let p = &self.prefixes;
        let n = p.length;
        let comp = p.composition;
        let automaton = SuffixAutomaton::new(strategy);
        let span = automaton.span;
        if span > n {
            return BigUint::zero();
        }
        let states = automaton.len();
        let needed = strategy.occurrences();

        let bands: Vec<Vec<T>> = p.rows.iter().map(|row| row.iter().map(T::from_big).collect()).collect();
        let width = |i: usize| bands[i].len();
        let at = |width: usize, r: usize, st: usize, j: usize| ((r - 1) * states + st) * width + j;

        // Layer 0: empty prefix; no suffix shorter than the span holds a window.
        let mut prev: Vec<T> = vec![T::zero(); needed * states * width(0)];
        for i in 1..=n {
            let (lo, _) = PrefixCounts::range(comp, i);
            let (prev_lo, _) = PrefixCounts::range(comp, i - 1);
            let w = width(i);
            let pw = width(i - 1);
            let mut cur: Vec<T> = vec![T::zero(); needed * states * w];
            for j in 0..w {
                if bands[i][j].is_zero() {
                    continue;
                }
                let m = lo + j;
                // Predecessor column for a trailing mismatch (index 0) or match (index 1).
                let pred = [0usize, 1].map(|c| {
                    let pm = m.checked_sub(c)?;
                    let pj = pm.checked_sub(prev_lo)?;
                    (pj < pw && !bands[i - 1][pj].is_zero()).then_some(pj)
                });
                for st in 0..states {
                    if i + automaton.lengths[st] < span {
                        continue;
                    }
                    for r in 1..=needed {
                        let mut acc = T::zero();
                        for c in 0..2 {
                            let Some(pj) = pred[c] else { continue };
                            match automaton.steps[st][c] {
                                Step::Continue(next) => acc += &prev[at(pw, r, next, pj)],
                                Step::Hit { .. } if r == 1 => acc += &bands[i - 1][pj],
                                Step::Hit { rest } => acc += &prev[at(pw, r - 1, rest, pj)],
                            }
                        }
                        cur[at(w, r, st, j)] = acc;
                    }
                }
            }
            prev = cur;
        }
        debug_assert_eq!(width(n), 1);
        prev[at(1, needed, 0, 0)].clone().into_big()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensitivityQuery {
    pub strategy: DetectionStrategy,
    pub scheme: ScoringScheme,
    pub length: usize,
    pub score: i64,
    pub model: AlignmentModel,
}

impl SensitivityQuery {
    pub fn single(seed: Seed, scheme: ScoringScheme, length: usize, score: i64, model: AlignmentModel) -> Self {
        Self {
            strategy: DetectionStrategy::single(seed),
            scheme,
            length,
            score,
            model,
        }
    }
}

/// Exact hit probability as a count ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensitivityReport {
    pub query: SensitivityQuery,
    /// Alignments detected by the strategy.
    pub numerator: BigUint,
    /// Alignments in the model.
    pub denominator: BigUint,
}

impl SensitivityReport {
    pub fn probability(&self) -> Ratio<BigUint> {
        Ratio::new(self.numerator.clone(), self.denominator.clone())
    }

    pub fn decimal(&self, precision: usize) -> String {
        render_ratio(&self.numerator, &self.denominator, precision)
    }

    pub fn to_f64(&self) -> f64 {
        // both may exceed f64 range only for astronomically long alignments
        let scale = self.denominator.bits().saturating_sub(60);
        let num = (&self.numerator >> scale).to_f64().unwrap_or(f64::NAN);
        let den = (&self.denominator >> scale).to_f64().unwrap_or(f64::NAN);
        num / den
    }
}

pub fn hit_probability(query: &SensitivityQuery) -> Result<SensitivityReport> {
    let engine = SensitivityEngine::new(&query.scheme, query.length, query.score, query.model)?;
    Ok(engine.evaluate(&query.strategy))
}

/// Monte-Carlo estimate of a hit probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub hits: u64,
    pub samples: u64,
    pub fraction: f64,
    /// Binomial standard error `sqrt(f (1 - f) / samples)`.
    pub std_error: f64,
}

impl McEstimate {
    fn from_hits(hits: u64, samples: u64) -> Self {
        let fraction = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
        let std_error = if samples == 0 {
            0.0
        } else {
            (fraction * (1.0 - fraction) / samples as f64).sqrt()
        };
        Self {
            hits,
            samples,
            fraction,
            std_error,
        }
    }
}

enum ModelSampler {
    Homogeneous(FixedScoreSampler),
    Uniform { length: usize, mismatches: usize },
}

impl ModelSampler {
    fn new(query: &SensitivityQuery) -> Result<Self> {
        match query.model {
            AlignmentModel::Homogeneous => Ok(Self::Homogeneous(FixedScoreSampler::new(
                &query.scheme,
                query.length,
                query.score,
            )?)),
            AlignmentModel::UniformFixedScore => {
                let composition =
                    feasible_composition(&query.scheme, query.length, query.score).ok_or(Error::InfeasibleScore {
                        n: query.length,
                        score: query.score,
                    })?;
                Ok(Self::Uniform {
                    length: query.length,
                    mismatches: composition.mismatches,
                })
            }
        }
    }

    fn detects(&self, strategy: &DetectionStrategy, stream: &mut RandomStream) -> bool {
        let alignment = match self {
            Self::Homogeneous(sampler) => sampler.draw(stream),
            Self::Uniform { length, mismatches } => draw_unconstrained(*length, *mismatches, stream),
        };
        strategy_detects(strategy, &alignment)
    }
}

/// Fraction of `samples` random alignments from the query's model detected by
/// its strategy.
pub fn mc_estimate(query: &SensitivityQuery, samples: u64, stream: &mut RandomStream) -> Result<McEstimate> {
    let sampler = ModelSampler::new(query)?;
    let hits = (0..samples)
        .filter(|_| sampler.detects(&query.strategy, stream))
        .count() as u64;
    Ok(McEstimate::from_hits(hits, samples))
}

/// Parallel variant of [`mc_estimate`] using block-derived streams; the result
/// depends only on `seed`, not on the thread count.
pub fn mc_estimate_parallel(query: &SensitivityQuery, samples: u64, seed: u64) -> Result<McEstimate> {
    let sampler = ModelSampler::new(query)?;
    let hits = generate_blocks(seed, samples as usize, |stream| sampler.detects(&query.strategy, stream))
        .into_iter()
        .filter(|&hit| hit)
        .count() as u64;
    Ok(McEstimate::from_hits(hits, samples))
}
