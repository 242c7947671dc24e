use serde::Serialize;

use super::arrival::dod_volume;
use super::profile::{perimeter, ConeProfile};
use crate::error::{Error, Result};
use crate::geometry::{eta, Dim, SpacetimeVector};

/// Both sides of the volume-perimeter inequality, normalised so that caps
/// give equality.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IsoperimetricCheck {
    pub volume: f64,
    pub perimeter: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

fn normalised(dim: Dim, volume: f64, area: f64) -> (f64, f64) {
    let n = dim.n() as f64;
    let lhs = volume / (2.0 * dim.omega() / (n + 1.0));
    let rhs = (area / dim.sphere_area()).powf((n + 1.0) / (n - 1.0));
    (lhs, rhs)
}

pub fn isoperimetric_check(p: &ConeProfile, radial_nodes: usize) -> Result<IsoperimetricCheck> {
    let volume = dod_volume(p, radial_nodes)?;
    let perimeter = perimeter(p);
    let (lhs, rhs) = normalised(p.dim(), volume, perimeter);
    Ok(IsoperimetricCheck { volume, perimeter, lhs, rhs, ratio: lhs / rhs })
}

pub fn isoperimetric_ratio(p: &ConeProfile, radial_nodes: usize) -> Result<f64> {
    Ok(isoperimetric_check(p, radial_nodes)?.ratio)
}

fn lateral_point(p: &ConeProfile, i: usize) -> SpacetimeVector {
    let f = p.values()[i];
    let d = p.grid().node(i);
    SpacetimeVector::new(f, [f * d[0], f * d[1], f * d[2]])
}

fn lateral_mesh(p: &ConeProfile, mut measure: impl FnMut(&SpacetimeVector, &SpacetimeVector) -> f64) -> f64 {
    match p.dim() {
        Dim::Two => {
            let n = p.values().len();
            (0..n)
                .map(|i| {
                    let d = lateral_point(p, (i + 1) % n) - lateral_point(p, i);
                    measure(&d, &d).max(0.0).sqrt()
                })
                .sum()
        }
        Dim::Three => {
            let tris = p.grid().triangles().expect("icosphere grid");
            tris.iter()
                .map(|t| {
                    let a = lateral_point(p, t[0]);
                    let u = lateral_point(p, t[1]) - a;
                    let v = lateral_point(p, t[2]) - a;
                    let (uu, uv, vv) = (measure(&u, &u), measure(&u, &v), measure(&v, &v));
                    0.5 * (uu * vv - uv * uv).max(0.0).sqrt()
                })
                .sum()
        }
    }
}

fn euclid(a: &SpacetimeVector, b: &SpacetimeVector) -> f64 {
    a.t * b.t + crate::geometry::vector::dot(&a.x, &b.x)
}

/// Euclidean area of the lateral surface `{ (f, f theta) }` in `R^{n+1}`,
/// measured on the polygon (n = 2) or triangulation (n = 3) through the nodes.
pub fn euclidean_lateral_area(p: &ConeProfile) -> Result<f64> {
    if p.sector_data().is_some() {
        return Err(Error::RequiresSmooth);
    }
    Ok(lateral_mesh(p, euclid))
}

/// Area of the same mesh in the induced Minkowski metric. Chords between
/// null vectors are spacelike, so this is well defined and never exceeds the
/// Euclidean mesh area; the two agree only when every chord is horizontal.
pub fn minkowski_lateral_area(p: &ConeProfile) -> Result<f64> {
    if p.sector_data().is_some() {
        return Err(Error::RequiresSmooth);
    }
    Ok(lateral_mesh(p, eta))
}

/// Volume bound through the Euclidean lateral area.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EuclidCheck {
    pub volume: f64,
    pub perimeter: f64,
    pub euclidean_area: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

pub fn euclid_check(p: &ConeProfile, radial_nodes: usize) -> Result<EuclidCheck> {
    let volume = dod_volume(p, radial_nodes)?;
    let euclidean_area = euclidean_lateral_area(p)?;
    let (lhs, rhs) = normalised(p.dim(), volume, euclidean_area);
    Ok(EuclidCheck { volume, perimeter: perimeter(p), euclidean_area, lhs, rhs, ratio: lhs / rhs })
}
