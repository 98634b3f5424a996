//! Criterion benchmarks for the hot paths of `dsc-core`; see `benches/`.
