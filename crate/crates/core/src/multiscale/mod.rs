//! Scale-indexed coefficients and their `dr/r` energies.

mod coeffs;
mod energy;
mod strip;
mod tangent;

pub use coeffs::*;
pub use energy::*;
pub use strip::*;
pub use tangent::*;
