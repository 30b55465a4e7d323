//! Criterion benchmarks for `mage-core`; see `benches/`.
