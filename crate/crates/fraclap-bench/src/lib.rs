//! Benchmark-only crate; see `benches/discretization.rs`.
