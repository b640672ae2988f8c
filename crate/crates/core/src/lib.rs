//! Numerical toolkit for anisotropic isoperimetric problems on star-shaped
//! hypersurfaces in the plane and in 3-space.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! * [`sphere_grid`]: nodes, quadrature and tangential derivatives on `S^1` and `S^2`.
//! * [`minkowski`]: Minkowski norms `F`, their duals `F⁰` and Wulff shapes.
//! * [`hypersurface`]: radial graphs, their anisotropic geometry and the integral
//!   functionals (volume, anisotropic perimeter, weighted momenta, `Q`).
//! * [`iamcf`]: the inverse anisotropic mean curvature flow on radial graphs.
//! * [`stability`]: deficits, asymmetry index, Hausdorff distance and sweeps.
//!
//! IO, configuration and the command line live in the `wulff-lab` crate.
#![no_std]
// Whenever `std` is in the crate graph its inherent float methods shadow `num_traits::Float`.
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod fft;
pub mod hypersurface;
pub mod iamcf;
pub mod linalg;
pub mod minkowski;
pub mod optimize;
pub mod sphere_grid;
pub mod stability;

pub use error::{Error, Result};
pub use hypersurface::{GeometryCache, StarSurface};
pub use iamcf::{FlowConfig, FlowOutcome, FlowTrace};
pub use linalg::{Matrix, Vector};
pub use minkowski::{MinkowskiNorm, WulffShape};
pub use sphere_grid::SphereGrid;
pub use stability::DeficitReport;
