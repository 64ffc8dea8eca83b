use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use homseed::{CountTableC, CountTableD, FixedScoreSampler, RandomStream, ScoringScheme};

fn tables(c: &mut Criterion) {
    let scheme = ScoringScheme::BLAST;
    let mut group = c.benchmark_group("count_table_d");
    for (score, horizon) in [(16i64, 64usize), (32, 128), (64, 256)] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{score}x{horizon}")),
            &(score, horizon),
            |b, &(s, h)| b.iter(|| CountTableD::build(&scheme, black_box(s), h).unwrap()),
        );
    }
    group.finish();

    let mut group = c.benchmark_group("count_table_c");
    group.sample_size(10);
    for horizon in [32usize, 64, 128] {
        group.bench_with_input(BenchmarkId::from_parameter(horizon), &horizon, |b, &h| {
            b.iter(|| CountTableC::build(&scheme, black_box(h)).unwrap())
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let sampler = FixedScoreSampler::new(&ScoringScheme::BLAST, 64, 16).unwrap();
    let mut stream = RandomStream::new(1);
    c.bench_function("sample_fixed_64x16", |b| b.iter(|| sampler.draw(black_box(&mut stream))));
}

criterion_group!(benches, tables, sampling);
criterion_main!(benches);
