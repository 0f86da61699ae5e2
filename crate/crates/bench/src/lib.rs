//! Benchmarks for the exact pipelines live in `benches/`.
