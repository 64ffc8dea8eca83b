//! Criterion benchmarks for `homseed`. See `benches/`.
