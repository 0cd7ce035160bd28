//! Benchmark-only crate; see `benches/synthesis.rs`.
