//! Criterion benchmarks for tdrl-core live in `benches/`.
