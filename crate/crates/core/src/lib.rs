//! Hyperellipsoid bounds for the prediction manifolds of smooth models.
//!
//! A model `y_θ(t)` sampled at `N` points traces out a manifold in
//! prediction space. Approximating `y_θ` by a truncated Chebyshev or Taylor
//! expansion turns the manifold into (nearly) the image of a ball under a
//! fixed, column-scaled design matrix; the singular values of that matrix give
//! the widths of an enclosing hyperellipsoid.
//!
//! The crate is `no_std` (it needs `alloc`). Modules:
//!
//! * [`chebkit`]: Chebyshev series, Bernstein ellipses, truncation bounds.
//! * [`design`]: scaled Chebyshev/Vandermonde design matrices (1D and 2D).
//! * [`spectral`]: extended-precision Jacobi SVD, graded eigenvalue bounds,
//!   decay-rate fits.
//! * [`bounds`]: closed-form width bounds and width reports.
//! * [`models`]: the exponential, reaction-velocity and SIR example models
//!   with exact Taylor jets and the derivative constraint.
//! * [`manifold`]: constrained Monte Carlo sampling, projection onto the
//!   hyperellipsoid axes and enclosure certification.
#![no_std]
// `num_traits::Float` imports go unused whenever std is linked into the
// build, since f64's inherent methods then take over.
#![allow(unused_imports)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod chebkit;
pub mod design;
mod error;
pub mod manifold;
pub mod matrix;
pub mod models;
pub mod real;
pub mod spectral;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use real::{ExtReal, Real};
