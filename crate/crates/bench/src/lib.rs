//! Criterion benchmarks for the singlet test engine live in `benches/`.
