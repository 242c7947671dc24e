//! Numerical toolkit for finite lightcones in Minkowski space `R^{1,n}`, n = 2, 3.
//!
//! A finite lightcone is described by its profile `f` on the sphere of
//! directions: the cone is `{ r (1, theta) : 0 <= r < f(theta) }`. The crate
//! computes domains of dependence of such cones, Lorentz polarisations and
//! symmetrisations of profiles, the hyperboloid analogue, and area bounds for
//! achronal graphs.

pub mod achronal;
pub mod error;
pub mod geometry;
pub mod hyperboloid;
pub mod lightcone;
pub mod polarization;
pub mod random;
mod text;

pub use error::{Error, Result};
