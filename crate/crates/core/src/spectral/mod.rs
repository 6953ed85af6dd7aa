//! Fourier-side oracles for graph functions.

mod constants;
mod energies;
mod graph1d;

pub use constants::*;
pub use energies::*;
pub use graph1d::GraphFunction1D;
