use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use homseed::decimal::render_ratio;
use homseed::sample::generate_blocks;
use homseed::{
    count_homogeneous, count_unconstrained, find_optimal, hit_probability, mc_estimate_parallel,
    sample_unconstrained, Alignment, AlignmentModel, DetectionStrategy, FixedScoreSampler, FreeScoreSampler,
    RandomStream, ScoringScheme, SearchSpec, SensitivityEngine, SensitivityQuery,
};
use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;

mod args;
mod output;
mod selfcheck;

use args::{Cli, Command, GlobalArgs, ModelArg, QueryArgs};
use output::{Cell, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Consistency(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Consistency(_) => 4,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }
}

impl From<homseed::Error> for CliError {
    fn from(e: homseed::Error) -> Self {
        match e {
            homseed::Error::InfeasibleScore { .. } => CliError::Infeasible(e.to_string()),
            homseed::Error::UnreachableState(_) => CliError::Consistency(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let global = &cli.global;
    if let Some(threads) = global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads as usize)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let scheme = ScoringScheme::new(global.match_score, global.mismatch_penalty)?;
    let (report, failed) = match &cli.command {
        Command::Count { length, score, model } => (count(global, scheme, *length as usize, *score, *model)?, false),
        Command::Generate {
            length,
            score,
            samples,
            rng_seed,
            model,
        } => (
            generate(scheme, *length as usize, *score, *samples, *rng_seed, *model)?,
            false,
        ),
        Command::Sensitivity(query) => (sensitivity(global, scheme, query)?, false),
        Command::Mc {
            query,
            samples,
            rng_seed,
        } => (mc(global, scheme, query, *samples, *rng_seed)?, false),
        Command::Optimize {
            weight,
            max_span,
            length,
            score,
            model,
            top,
        } => {
            let spec = SearchSpec {
                weight: *weight,
                max_span: *max_span,
                scheme,
                length: *length as usize,
                score: *score,
                model: (*model).into(),
                top_k: *top as usize,
            };
            (optimize(global, &spec)?, false)
        }
        Command::Curve {
            seeds,
            score,
            length_range,
            model,
        } => {
            let lengths: Vec<usize> = length_range.lengths().collect();
            (curve(global, scheme, seeds, *score, &lengths, &model.models())?, false)
        }
        Command::Selfcheck { max_length } => {
            let outcomes = selfcheck::run(scheme, *max_length as usize);
            let failed = outcomes.iter().any(|o| !o.passed);
            let mut report = Report::new("selfcheck", vec!["property", "status", "detail"])
                .param("match", scheme.match_score())
                .param("mismatch", scheme.mismatch_penalty())
                .param("max_length", *max_length);
            for o in outcomes {
                let status = if o.passed { "PASS" } else { "FAIL" };
                report.text.push(format!("{status} {} ({})", o.property, o.detail));
                report.push_row(vec![o.property.into(), status.into(), o.detail.into()]);
            }
            (report, failed)
        }
    };
    let rendered = report.render(global.format)?;
    match &global.output {
        Some(path) => std::fs::write(path, rendered)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(rendered.as_bytes())?;
            stdout.flush()?;
        }
    }
    if failed {
        return Err(CliError::Consistency("selfcheck found inconsistencies".into()));
    }
    Ok(())
}

fn model_name(model: ModelArg) -> &'static str {
    AlignmentModel::from(model).name()
}

fn scheme_report(command: &'static str, columns: Vec<&'static str>, scheme: ScoringScheme) -> Report {
    Report::new(command, columns)
        .param("match", scheme.match_score())
        .param("mismatch", scheme.mismatch_penalty())
}

fn count(
    _global: &GlobalArgs,
    scheme: ScoringScheme,
    length: usize,
    score: Option<i64>,
    model: ModelArg,
) -> Result<Report, CliError> {
    let value = match (model, score) {
        (ModelArg::Homogeneous, _) => count_homogeneous(&scheme, length, score)?,
        (ModelArg::All, Some(s)) => count_unconstrained(&scheme, length, s)?,
        (ModelArg::All, None) => BigUint::from(1u32) << length,
    };
    let mut report = scheme_report("count", vec!["count"], scheme)
        .param("n", length)
        .param("score", score.map_or(Cell::from("any"), Cell::from))
        .param("model", model_name(model));
    report.text.push(value.to_string());
    report.push_row(vec![value.to_string().into()]);
    Ok(report)
}

fn generate(
    scheme: ScoringScheme,
    length: usize,
    score: Option<i64>,
    samples: usize,
    rng_seed: u64,
    model: ModelArg,
) -> Result<Report, CliError> {
    let alignments: Vec<Alignment> = match (model, score) {
        (ModelArg::Homogeneous, Some(s)) => {
            let sampler = FixedScoreSampler::new(&scheme, length, s)?;
            generate_blocks(rng_seed, samples, |stream| sampler.draw(stream))
        }
        (ModelArg::Homogeneous, None) => {
            let sampler = FreeScoreSampler::new(&scheme, length)?;
            generate_blocks(rng_seed, samples, |stream| sampler.draw(stream))
        }
        (ModelArg::All, Some(s)) => {
            sample_unconstrained(&scheme, length, s, 0, &mut RandomStream::new(rng_seed))?;
            generate_blocks(rng_seed, samples, |stream| {
                sample_unconstrained(&scheme, length, s, 1, stream)
                    .expect("feasibility checked")
                    .remove(0)
            })
        }
        (ModelArg::All, None) => generate_blocks(rng_seed, samples, |stream: &mut RandomStream| {
            Alignment::from_letters((0..length).map(|_| stream.gen::<bool>())).expect("length >= 1")
        }),
    };
    let mut report = scheme_report("generate", vec!["index", "alignment"], scheme)
        .param("n", length)
        .param("score", score.map_or(Cell::from("any"), Cell::from))
        .param("model", model_name(model))
        .param("rng_seed", rng_seed)
        .param("samples", samples);
    for (i, x) in alignments.iter().enumerate() {
        report.text.push(x.to_string());
        report.push_row(vec![i.into(), x.to_string().into()]);
    }
    Ok(report)
}

fn build_query(scheme: ScoringScheme, args: &QueryArgs) -> Result<SensitivityQuery, CliError> {
    let overlap = args.overlap.unwrap_or(args.seed.span() - 1);
    let strategy = DetectionStrategy::new(args.seed.clone(), args.occurrences, overlap)?;
    Ok(SensitivityQuery {
        strategy,
        scheme,
        length: args.length as usize,
        score: args.score,
        model: args.model.into(),
    })
}

fn query_report(command: &'static str, columns: Vec<&'static str>, query: &SensitivityQuery) -> Report {
    scheme_report(command, columns, query.scheme)
        .param("n", query.length)
        .param("score", query.score)
        .param("model", query.model.name())
        .param("seed", query.strategy.seed().as_str())
        .param("occurrences", query.strategy.occurrences())
        .param("overlap", query.strategy.max_overlap())
}

fn sensitivity(global: &GlobalArgs, scheme: ScoringScheme, args: &QueryArgs) -> Result<Report, CliError> {
    let query = build_query(scheme, args)?;
    let result = hit_probability(&query)?;
    let probability = result.decimal(global.precision);
    let mut report = query_report("sensitivity", vec!["numerator", "denominator", "probability"], &query)
        .param("precision", global.precision);
    report.text.push(probability.clone());
    report.push_row(vec![
        result.numerator.to_string().into(),
        result.denominator.to_string().into(),
        probability.into(),
    ]);
    Ok(report)
}

fn mc(
    global: &GlobalArgs,
    scheme: ScoringScheme,
    args: &QueryArgs,
    samples: u64,
    rng_seed: u64,
) -> Result<Report, CliError> {
    if samples == 0 {
        return Err(CliError::Usage("samples must be at least 1".into()));
    }
    let query = build_query(scheme, args)?;
    let estimate = mc_estimate_parallel(&query, samples, rng_seed)?;
    let fraction = render_ratio(&BigUint::from(estimate.hits), &BigUint::from(samples), global.precision);
    let std_error = format!("{:.*}", global.precision, estimate.std_error);
    let mut report = query_report("mc", vec!["hits", "estimate", "std_error"], &query)
        .param("samples", samples)
        .param("rng_seed", rng_seed)
        .param("precision", global.precision);
    report.text.push(format!("{fraction} +/- {std_error}"));
    report.push_row(vec![estimate.hits.into(), fraction.into(), std_error.into()]);
    Ok(report)
}

fn optimize(global: &GlobalArgs, spec: &SearchSpec) -> Result<Report, CliError> {
    let ranked = find_optimal(spec)?;
    eprintln!(
        "# searched {} seeds in {:.3} s",
        ranked.candidates,
        ranked.elapsed.as_secs_f64()
    );
    let mut report = scheme_report(
        "optimize",
        vec!["rank", "seed", "span", "weight", "numerator", "denominator", "probability"],
        spec.scheme,
    )
    .param("n", spec.length)
    .param("score", spec.score)
    .param("model", spec.model.name())
    .param("weight", spec.weight)
    .param("max_span", spec.max_span)
    .param("candidates", ranked.candidates)
    .param("precision", global.precision);
    report.inline_params = false;
    for (i, r) in ranked.seeds.iter().enumerate() {
        let probability = render_ratio(&r.numerator, &r.denominator, global.precision);
        report.text.push(format!("{} {} {}", i + 1, r.seed, probability));
        report.push_row(vec![
            (i + 1).into(),
            r.seed.as_str().into(),
            r.seed.span().into(),
            r.seed.weight().into(),
            r.numerator.to_string().into(),
            r.denominator.to_string().into(),
            probability.into(),
        ]);
    }
    Ok(report)
}

fn curve(
    global: &GlobalArgs,
    scheme: ScoringScheme,
    seeds: &[homseed::Seed],
    score: i64,
    lengths: &[usize],
    models: &[AlignmentModel],
) -> Result<Report, CliError> {
    let jobs: Vec<(usize, AlignmentModel)> = lengths
        .iter()
        .flat_map(|&n| models.iter().map(move |&m| (n, m)))
        .collect();
    let evaluated: Vec<Vec<Vec<Cell>>> = jobs
        .par_iter()
        .map(|&(n, model)| {
            let engine = match SensitivityEngine::new(&scheme, n, score, model) {
                Ok(engine) => engine,
                Err(homseed::Error::InfeasibleScore { .. }) => return Ok(Vec::new()),
                Err(e) => return Err(CliError::from(e)),
            };
            Ok(seeds
                .iter()
                .map(|seed| {
                    let result = engine.evaluate(&DetectionStrategy::single(seed.clone()));
                    vec![
                        n.into(),
                        score.into(),
                        seed.as_str().into(),
                        model.name().into(),
                        result.numerator.to_string().into(),
                        result.denominator.to_string().into(),
                        result.decimal(global.precision).into(),
                    ]
                })
                .collect())
        })
        .collect::<Result<_, CliError>>()?;
    let mut report = scheme_report(
        "curve",
        vec!["n", "score", "seed", "model", "numerator", "denominator", "probability"],
        scheme,
    )
    .param("score", score)
    .param("lengths", format!("{}:{}", lengths[0], lengths[lengths.len() - 1]))
    .param("precision", global.precision);
    report.inline_params = false;
    report.comment_first = true;
    for row in evaluated.into_iter().flatten() {
        report.text.push(row.iter().map(cell_text).collect::<Vec<_>>().join(" "));
        report.push_row(row);
    }
    Ok(report)
}

fn cell_text(c: &Cell) -> String {
    match c {
        Cell::Int(v) => v.to_string(),
        Cell::Text(s) => s.clone(),
    }
}
