//! Criterion benchmarks for carlitz-core live under `benches/`.
