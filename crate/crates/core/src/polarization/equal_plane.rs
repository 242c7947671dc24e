//! Mirrors that split the perimeter of a profile into equal halves.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{eta, SpacetimeVector, TimelikeHyperplane};
use crate::lightcone::{perimeter, ConeProfile};

/// Orthonormal basis of a timelike 2-plane: future unit timelike `e_t` and
/// unit spacelike `e_s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimelikePlaneBasis {
    pub e_t: SpacetimeVector,
    pub e_s: SpacetimeVector,
}

impl TimelikePlaneBasis {
    pub fn new(a: &SpacetimeVector, b: &SpacetimeVector) -> Result<Self> {
        let (g11, g12, g22) = (eta(a, a), eta(a, b), eta(b, b));
        let det = g11 * g22 - g12 * g12;
        let scale = a.euclid_norm_sq() * b.euclid_norm_sq();
        if !(det < -1e-12 * scale) {
            return Err(Error::PlaneNotTimelike);
        }
        // The Gram matrix has one negative and one positive eigenvalue; its
        // eigenvectors are both Euclidean- and eta-orthogonal.
        let tr = g11 + g22;
        let disc = ((g11 - g22) * (g11 - g22) + 4.0 * g12 * g12).sqrt();
        let neg = 0.5 * (tr - disc);
        let pos = 0.5 * (tr + disc);
        let eig = |lam: f64| -> (f64, f64) {
            if g12.abs() > 1e-300 {
                (g12, lam - g11)
            } else if (g11 - lam).abs() < (g22 - lam).abs() {
                (1.0, 0.0)
            } else {
                (0.0, 1.0)
            }
        };
        let (p, q) = eig(neg);
        let mut e_t = (*a * p + *b * q).normalized();
        if e_t.t < 0.0 {
            e_t = -e_t;
        }
        let (p, q) = eig(pos);
        let e_s = (*a * p + *b * q).normalized();
        Ok(TimelikePlaneBasis { e_t, e_s })
    }

    /// Unit normal `(e_s + tau e_t) / sqrt(1 - tau^2)`, spacelike for |tau| < 1.
    pub fn normal(&self, tau: f64) -> SpacetimeVector {
        (self.e_s + self.e_t * tau) * (1.0 / (1.0 - tau * tau).sqrt())
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EqualPerimeterPlane {
    pub hyperplane: TimelikeHyperplane,
    pub basis: TimelikePlaneBasis,
    pub tau: f64,
    /// Perimeter carried by the side containing the normal, and the rest.
    pub plus_share: f64,
    pub minus_share: f64,
    /// False when the mirror contains `e0`, so `e0` cannot act as polariser.
    pub admits_rest_polariser: bool,
}

/// Node-wise split data: the side coordinate `a_i` (node ray is on the
/// normal's side iff `a_i > tau`) and a half-width `h_i` over which the node's
/// weight is shared, so the split is continuous in `tau`.
struct Split {
    a: Vec<f64>,
    h: Vec<f64>,
    mass: Vec<f64>,
}

impl Split {
    fn new(p: &ConeProfile, basis: &TimelikePlaneBasis) -> Split {
        let grid = p.grid();
        let a: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|d| {
                let l = SpacetimeVector::new(1.0, *d);
                eta(&l, &basis.e_s) / -eta(&l, &basis.e_t)
            })
            .collect();
        let h = (0..grid.len())
            .map(|i| 0.5 * grid.neighbors(i).iter().map(|&j| (a[j] - a[i]).abs()).fold(0.0, f64::max))
            .collect();
        let e = p.dim().n() as i32 - 1;
        let mass = grid.weights().iter().zip(p.values()).map(|(w, f)| w * f.powi(e)).collect();
        Split { a, h, mass }
    }

    fn plus(&self, tau: f64) -> f64 {
        self.a
            .iter()
            .zip(&self.h)
            .zip(&self.mass)
            .map(|((a, h), m)| {
                let frac = if *h > 0.0 {
                    ((a + h - tau) / (2.0 * h)).clamp(0.0, 1.0)
                } else if *a > tau {
                    1.0
                } else {
                    0.0
                };
                m * frac
            })
            .sum()
    }
}

/// Mirror from the pencil of normals in the timelike 2-plane spanned by `a`
/// and `b` whose two sides carry equal perimeter.
pub fn equal_perimeter_plane(p: &ConeProfile, a: &SpacetimeVector, b: &SpacetimeVector) -> Result<EqualPerimeterPlane> {
    let basis = TimelikePlaneBasis::new(a, b)?;
    let split = Split::new(p, &basis);
    let total = perimeter(p);
    let half = 0.5 * total;
    let (mut lo, mut hi) = (-1.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if split.plus(mid) > half {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let tau = 0.5 * (lo + hi);
    let plus_share = split.plus(tau);
    if tau.abs() >= 1.0 - 1e-12 || (plus_share - half).abs() > 1e-10 * total {
        return Err(Error::NoEqualSplit);
    }
    let w = basis.normal(tau);
    let hyperplane = TimelikeHyperplane::from_normal(w)?;
    Ok(EqualPerimeterPlane {
        hyperplane,
        basis,
        tau,
        plus_share,
        minus_share: total - plus_share,
        admits_rest_polariser: w.t.abs() >= crate::geometry::plane::EPS_POLARISER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SphereGrid;
    use std::sync::Arc;

    #[test]
    fn unit_cone_splits_through_rest_frame() {
        let g = Arc::new(SphereGrid::circle(256));
        let p = ConeProfile::constant(g, 1.0).unwrap();
        let e = equal_perimeter_plane(&p, &SpacetimeVector::time_unit(), &SpacetimeVector::spatial_unit(1)).unwrap();
        assert!(e.tau.abs() < 1e-12);
        assert!(!e.admits_rest_polariser);
    }

    #[test]
    fn lopsided_profile_tilts_the_mirror() {
        let g = Arc::new(SphereGrid::circle(1024));
        let p = ConeProfile::from_fn(g, |d| 1.0 + 0.5 * d[0]).unwrap();
        let e = equal_perimeter_plane(&p, &SpacetimeVector::time_unit(), &SpacetimeVector::spatial_unit(1)).unwrap();
        assert!((e.plus_share - e.minus_share).abs() < 1e-9 * perimeter(&p));
        assert!(e.tau.abs() > 1e-3);
        assert!(e.admits_rest_polariser);
    }

    #[test]
    fn rejects_spacelike_plane() {
        let g = Arc::new(SphereGrid::circle(64));
        let p = ConeProfile::constant(g, 1.0).unwrap();
        let r = equal_perimeter_plane(&p, &SpacetimeVector::spatial_unit(1), &SpacetimeVector::spatial_unit(2));
        assert!(matches!(r, Err(Error::PlaneNotTimelike)));
    }
}
