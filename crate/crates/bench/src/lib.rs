//! Benchmarks live in `benches/`; run them with `cargo bench -p quartdiff-bench`.

pub use quartdiff_core;
