//! Benchmarks for `spinchain`; see `benches/`.
