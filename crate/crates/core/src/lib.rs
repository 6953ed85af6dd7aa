//! Multiscale geometric square functions on planar curves, Fourier-side
//! identity checks, and a stopping-time construction of approximating
//! Lipschitz graphs.

pub mod construction;
pub mod corpus;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod multiscale;
pub mod quad;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::*;
pub use kernel::Kernel;
pub use quad::{pairwise_sum, RadialGrid};
