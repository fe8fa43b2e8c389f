//! Criterion benchmarks for the core library; see `benches/`.
