//! Lorentz reflections acting on the sphere of null directions.
//!
//! The reflection about the mirror with unit normal `w` sends the null
//! vector `(1, theta)` to `lambda(theta) (1, Gamma(theta))`, where
//! `lambda = 1 - 2 (<theta, w_x> - w_t) w_t`. Since the reflection is an
//! involution, `Gamma` is one too and `lambda(Gamma theta) lambda(theta) = 1`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::vector::{dot, scale, sub};
use crate::geometry::{eta, ReflectionPlane, Side, SpacetimeVector, Spatial, SphereGrid, Stencil, TimelikeHyperplane};

pub fn conformal_factor(w: &SpacetimeVector, theta: &Spatial) -> f64 {
    1.0 - 2.0 * (dot(theta, &w.x) - w.t) * w.t
}

pub fn conformal_map(w: &SpacetimeVector, theta: &Spatial) -> Spatial {
    let k = dot(theta, &w.x) - w.t;
    let lambda = 1.0 - 2.0 * k * w.t;
    scale(&sub(theta, &scale(&w.x, 2.0 * k)), 1.0 / lambda)
}

/// Precomputed action of a reflection on a direction grid.
#[derive(Clone, Debug)]
pub struct ConformalReflection {
    grid: Arc<SphereGrid>,
    hyperplane: TimelikeHyperplane,
    plane: Option<ReflectionPlane>,
    images: Vec<Spatial>,
    factors: Vec<f64>,
    stencils: Vec<Stencil>,
    image_factors: Vec<f64>,
    normal_sides: Vec<Side>,
}

impl ConformalReflection {
    pub fn new(plane: &ReflectionPlane, grid: Arc<SphereGrid>) -> Self {
        let mut cr = Self::from_hyperplane(plane.hyperplane(), grid);
        cr.plane = Some(*plane);
        cr
    }

    /// Reflection without a polariser; enough for reflecting and symmetrising.
    pub fn from_hyperplane(hyperplane: &TimelikeHyperplane, grid: Arc<SphereGrid>) -> Self {
        let w = *hyperplane.normal();
        let images: Vec<Spatial> = grid.nodes().iter().map(|d| conformal_map(&w, d)).collect();
        let factors = grid.nodes().iter().map(|d| conformal_factor(&w, d)).collect();
        let image_factors = images.iter().map(|d| conformal_factor(&w, d)).collect();
        let stencils = grid.locate_all(&images);
        let band = crate::geometry::plane::EPS_ON * std::f64::consts::SQRT_2;
        let normal_sides = grid
            .nodes()
            .iter()
            .map(|d| {
                let s = eta(&SpacetimeVector::new(1.0, *d), &w);
                if s.abs() <= band {
                    Side::On
                } else if s > 0.0 {
                    Side::Plus
                } else {
                    Side::Minus
                }
            })
            .collect();
        ConformalReflection {
            grid,
            hyperplane: *hyperplane,
            plane: None,
            images,
            factors,
            stencils,
            image_factors,
            normal_sides,
        }
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn hyperplane(&self) -> &TimelikeHyperplane {
        &self.hyperplane
    }

    pub fn plane(&self) -> Option<&ReflectionPlane> {
        self.plane.as_ref()
    }

    /// `Gamma(theta_i)` for every node.
    pub fn images(&self) -> &[Spatial] {
        &self.images
    }

    /// `lambda(theta_i)` for every node.
    pub fn factors(&self) -> &[f64] {
        &self.factors
    }

    /// `lambda(Gamma theta_i)` for every node.
    pub fn image_factors(&self) -> &[f64] {
        &self.image_factors
    }

    pub fn stencils(&self) -> &[Stencil] {
        &self.stencils
    }

    /// Side of each node ray relative to the normal: `Plus` where `eta(l, w) > 0`.
    pub fn normal_sides(&self) -> &[Side] {
        &self.normal_sides
    }

    /// Side of each node ray relative to the polariser.
    pub fn polariser_sides(&self) -> Result<Vec<Side>> {
        let plane = self.plane.ok_or(Error::MissingPolariser)?;
        let flip = plane.orientation() < 0.0;
        Ok(self
            .normal_sides
            .iter()
            .map(|s| match (s, flip) {
                (Side::Plus, true) => Side::Minus,
                (Side::Minus, true) => Side::Plus,
                (s, _) => *s,
            })
            .collect())
    }
}
