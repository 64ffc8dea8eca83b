//! Brute-force consistency checks run by `homseed selfcheck`.

use std::collections::BTreeMap;

use homseed::count::forward_band_counts;
use homseed::model::oracle::enumerate_homogeneous_with_limit;
use homseed::{
    count_homogeneous, is_homogeneous, is_homogeneous_by_segments, score, strategy_detects, Alignment,
    AlignmentModel, CountTableD, DetectionStrategy, FixedScoreSampler, FreeScoreSampler, RandomStream,
    ScoringScheme, Seed, SensitivityEngine,
};
use num_bigint::BigUint;

pub struct Outcome {
    pub property: &'static str,
    pub passed: bool,
    pub detail: String,
}

const SEEDS: [&str; 7] = ["1", "11", "101", "111", "1101", "11011", "10011"];

fn all_alignments(n: usize) -> Vec<Alignment> {
    (0..1u64 << n).map(|mask| Alignment::from_mask(n, mask).expect("n <= 20")).collect()
}

fn schemes(user: ScoringScheme) -> Vec<ScoringScheme> {
    let mut out: Vec<ScoringScheme> = [(1, 1), (1, 3), (2, 3)]
        .into_iter()
        .map(|(s, p)| ScoringScheme::new(s, p).expect("valid"))
        .collect();
    if !out.contains(&user) {
        out.push(user);
    }
    out
}

/// Runs every check up to length `max_length` and reports each one.
pub fn run(user: ScoringScheme, max_length: usize) -> Vec<Outcome> {
    let schemes = schemes(user);
    let mut failures: BTreeMap<&'static str, Vec<String>> = BTreeMap::new();
    let mut checked: BTreeMap<&'static str, u64> = BTreeMap::new();
    let mut record = |property: &'static str, ok: bool, what: String| {
        *checked.entry(property).or_default() += 1;
        if !ok {
            failures.entry(property).or_default().push(what);
        }
    };

    for scheme in &schemes {
        for n in 1..=max_length {
            let everything = all_alignments(n);
            let mut by_score: BTreeMap<i64, Vec<&Alignment>> = BTreeMap::new();
            let mut homogeneous_by_score: BTreeMap<i64, Vec<&Alignment>> = BTreeMap::new();
            for x in &everything {
                let walk = is_homogeneous(x, scheme);
                record(
                    "homogeneity-routes",
                    walk == is_homogeneous_by_segments(x, scheme),
                    format!("{scheme} {x}"),
                );
                by_score.entry(score(x, scheme)).or_default().push(x);
                if walk {
                    homogeneous_by_score.entry(score(x, scheme)).or_default().push(x);
                }
            }

            let free = count_homogeneous(scheme, n, None);
            let total: usize = homogeneous_by_score.values().map(Vec::len).sum();
            record(
                "count-oracle",
                free.as_ref().is_ok_and(|c| *c == BigUint::from(total)),
                format!("{scheme} n={n} free"),
            );
            let mut partition = BigUint::default();
            for &s in by_score.keys() {
                let expected = homogeneous_by_score.get(&s).map_or(0, Vec::len);
                let counted = count_homogeneous(scheme, n, Some(s)).unwrap_or_default();
                record(
                    "count-oracle",
                    counted == BigUint::from(expected),
                    format!("{scheme} n={n} S={s}"),
                );
                partition += counted;
            }
            record(
                "score-partition",
                free.is_ok_and(|c| c == partition),
                format!("{scheme} n={n}"),
            );

            for (&s, population) in &by_score {
                let homogeneous = homogeneous_by_score.get(&s).cloned().unwrap_or_default();
                for (model, members) in [
                    (AlignmentModel::Homogeneous, &homogeneous),
                    (AlignmentModel::UniformFixedScore, population),
                ] {
                    let Ok(engine) = SensitivityEngine::new(scheme, n, s, model) else {
                        record(
                            "sensitivity-oracle",
                            members.is_empty(),
                            format!("{scheme} n={n} S={s} {} rejected", model.name()),
                        );
                        continue;
                    };
                    for text in SEEDS {
                        let seed: Seed = text.parse().expect("valid seed");
                        let span = seed.span();
                        for k in 1..=2 {
                            for overlap in [0, span - 1] {
                                let strategy =
                                    DetectionStrategy::new(seed.clone(), k, overlap).expect("valid strategy");
                                let hits = members.iter().filter(|x| strategy_detects(&strategy, x)).count();
                                let report = engine.evaluate(&strategy);
                                record(
                                    "sensitivity-oracle",
                                    report.numerator == BigUint::from(hits)
                                        && report.denominator == BigUint::from(members.len()),
                                    format!("{scheme} n={n} S={s} {} {text} K={k} overlap={overlap}", model.name()),
                                );
                            }
                        }
                    }
                }
            }
        }

        let horizon = max_length;
        for target in 1..=(horizon as i64 * scheme.match_score()) {
            let forward = forward_band_counts(scheme, target, horizon);
            let Ok(table) = CountTableD::build(scheme, target, horizon) else {
                record("flip-identity", false, format!("{scheme} S={target} table"));
                continue;
            };
            for (i, row) in forward.iter().enumerate().take(horizon).skip(1) {
                for y in 1..target {
                    let expected = row.get(y as usize).cloned().unwrap_or_default();
                    record(
                        "flip-identity",
                        *table.count(target - y, i) == expected,
                        format!("{scheme} S={target} i={i} y={y}"),
                    );
                }
            }
        }

        let mut stream = RandomStream::new(max_length as u64);
        let n = max_length;
        for target in 1..=(n as i64 * scheme.match_score()) {
            if let Ok(sampler) = FixedScoreSampler::new(scheme, n, target) {
                let ok = (0..200).all(|_| {
                    let x = sampler.draw(&mut stream);
                    x.len() == n && score(&x, scheme) == target && is_homogeneous(&x, scheme)
                });
                record("sampler-validity", ok, format!("{scheme} n={n} S={target}"));
            }
        }
        match FreeScoreSampler::new(scheme, n) {
            Ok(sampler) => {
                let ok = (0..200).all(|_| {
                    let x = sampler.draw(&mut stream);
                    x.len() == n && is_homogeneous(&x, scheme)
                });
                record("sampler-validity", ok, format!("{scheme} n={n} free"));
            }
            Err(e) => record("sampler-validity", false, format!("{scheme} n={n} free: {e}")),
        }
    }

    // oracle sizes stay bounded by the enumeration limit
    record(
        "oracle-limit",
        enumerate_homogeneous_with_limit(&schemes[0], 21, None, 20).is_err(),
        "n=21 accepted".into(),
    );

    checked
        .into_iter()
        .map(|(property, count)| {
            let failed = failures.remove(property).unwrap_or_default();
            let detail = match failed.first() {
                None => format!("{count} cases"),
                Some(first) => format!("{} of {count} cases failed, first: {first}", failed.len()),
            };
            Outcome {
                property,
                passed: failed.is_empty(),
                detail,
            }
        })
        .collect()
}
