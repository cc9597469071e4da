//! Benchmark-only crate; see `benches/transducer.rs`.
