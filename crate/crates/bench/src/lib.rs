//! Criterion benchmarks of the coefficient, energy, spectral and construction paths; see `benches/`.
