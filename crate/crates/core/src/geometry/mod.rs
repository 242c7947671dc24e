//! Minkowski vectors, mirrors and direction grids.

pub mod plane;
pub mod sphere;
pub mod vector;

pub use plane::{ReflectionPlane, Side, TimelikeHyperplane};
pub use sphere::{sphere_grid, SphereGrid, Stencil};
pub use vector::{causal_class, eta, CausalClass, CausalKind, Dim, SpacetimeVector, Spatial, TimeOrientation};
