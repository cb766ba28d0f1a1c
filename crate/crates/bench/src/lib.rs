//! Criterion benchmarks for the search and audit kernels; see `benches/`.
