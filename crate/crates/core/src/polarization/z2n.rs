//! Iterated symmetrisation about n mutually orthogonal equal-perimeter mirrors.

use super::equal_plane::equal_perimeter_plane;
use super::profile_ops::{symmetrize_profile, SymmetrizeSign};
use crate::error::Result;
use crate::geometry::{eta, SpacetimeVector, TimelikeHyperplane};
use crate::lightcone::ConeProfile;

#[derive(Clone, Debug)]
pub struct Z2nSymmetrization {
    pub profile: ConeProfile,
    pub normals: Vec<TimelikeHyperplane>,
    /// Future unit timelike vector orthogonal to every normal.
    pub axis: SpacetimeVector,
}

fn project_out(x: &SpacetimeVector, normals: &[TimelikeHyperplane]) -> SpacetimeVector {
    normals.iter().fold(*x, |acc, h| acc - *h.normal() * eta(&acc, h.normal()))
}

/// Symmetrises `p` in turn about mirrors chosen from the timelike planes
/// `span(e0, e_k)` restricted to the orthogonal complement of the previous
/// normals. Each step keeps the half containing the new normal.
pub fn z2n_symmetrize(p: &ConeProfile) -> Result<Z2nSymmetrization> {
    let n = p.dim().n();
    let mut profile = p.clone();
    let mut normals: Vec<TimelikeHyperplane> = Vec::with_capacity(n);
    for k in 1..=n {
        let a = project_out(&SpacetimeVector::time_unit(), &normals);
        let b = project_out(&SpacetimeVector::spatial_unit(k), &normals);
        let b = b - a * (eta(&b, &a) / eta(&a, &a));
        let plane = equal_perimeter_plane(&profile, &a, &b)?;
        profile = symmetrize_profile(&profile, &plane.hyperplane, SymmetrizeSign::Plus)?;
        normals.push(plane.hyperplane);
    }
    let mut axis = project_out(&SpacetimeVector::time_unit(), &normals).normalized();
    if axis.t < 0.0 {
        axis = -axis;
    }
    Ok(Z2nSymmetrization { profile, normals, axis })
}
