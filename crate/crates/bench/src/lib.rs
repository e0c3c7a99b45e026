//! Criterion benchmarks for logpair-core; see `benches/core.rs`.
