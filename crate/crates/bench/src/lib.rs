//! Criterion benchmarks for the simulator and the Lie-closure checks live in
//! `benches/`; this crate has no library code of its own.
