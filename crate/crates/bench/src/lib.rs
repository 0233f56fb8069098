//! Benchmark harness for the blochsep crate; see `benches/`.
