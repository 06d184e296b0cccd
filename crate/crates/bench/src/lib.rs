//! Benchmarks for the constructions, the ingredient search and the oracle.
//! The benchmark bodies live in `benches/`.
