//! Criterion benchmarks for the hamburger library; see `benches/`.
