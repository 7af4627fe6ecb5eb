//! Criterion benchmarks for the decision procedures; see `benches/`.
