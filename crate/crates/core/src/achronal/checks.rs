//! Area bounds for achronal graphs in domains of dependence.

use serde::Serialize;

use super::flat::{area_flat, FlatGraph};
use crate::error::Result;
use crate::geometry::{Dim, Spatial};
use crate::hyperboloid::{
    ball_radius_for_volume, causal_bounds, hyp_perimeter, hyp_volume, HypDodResolution, HyperbolicSet,
};
use crate::lightcone::{perimeter, ArrivalField, ConeProfile};

/// Slack on `u_- < nu < u_+` when testing containment in `D(E)`.
pub const HYP_CONTAINMENT_TOL: f64 = 1e-5;

/// Result of an area check, serialised as the JSON record of the checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AchronalCheck {
    pub area: f64,
    pub bound: f64,
    /// Area over the smallest available bound.
    pub ratio: f64,
    pub contained: bool,
    /// Lattice cells per side, or shells for hyperbolic-chart graphs.
    pub resolution: usize,
    pub tail_bound: f64,
    /// Second bound, when the check has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_b: Option<f64>,
}

/// `w_n (P / (n w_n))^{n/(n-1)}`: the area of the flat disk whose cone has perimeter P.
pub fn perimeter_area_bound(dim: Dim, p: f64) -> f64 {
    let n = dim.n() as f64;
    dim.omega() * (p / dim.sphere_area()).powf(n / (n - 1.0))
}

/// Area of the part of the graph inside the future of the origin against the
/// perimeter bound of the cone `p`. Containment means `nu < u` at every node
/// of that part, with `u` the arrival field of `p`.
pub fn check_cone_graph(g: &FlatGraph, p: &ConeProfile) -> Result<AchronalCheck> {
    let region = g.future_part()?;
    let area = area_flat(&region)?;
    let bound = perimeter_area_bound(p.dim(), perimeter(p));
    let field = ArrivalField::new(p);
    let contained = (0..g.len()).filter(|&k| region.in_domain(k)).all(|k| {
        let x = g.node(k);
        g.values()[k] < field.eval(&[x[0], x[1], 0.0])
    });
    Ok(AchronalCheck {
        area,
        bound,
        ratio: area / bound,
        contained,
        resolution: g.cells(),
        tail_bound: 0.0,
        bound_b: None,
    })
}

/// Area of a graph over its domain against the hyperboloid bounds: the
/// perimeter bound of E, and the area `w_n sinh^n r` of the flat disk
/// spanning the geodesic ball with the volume of E. Containment means
/// `u_-(x) < nu(x) < u_+(x)` at every domain node.
pub fn check_hyperboloid_graph(g: &FlatGraph, e: &HyperbolicSet, res: &HypDodResolution) -> Result<AchronalCheck> {
    let dim = e.dim();
    let area = area_flat(g)?;
    let bound_a = perimeter_area_bound(dim, hyp_perimeter(e)?);
    let radius = ball_radius_for_volume(dim, hyp_volume(e)?);
    let bound_b = dim.omega() * radius.sinh().powi(dim.n() as i32);
    let nodes: Vec<usize> = (0..g.len()).filter(|&k| g.in_domain(k)).collect();
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).max(1);
    let chunk = nodes.len().div_ceil(threads).max(1);
    let contained = std::thread::scope(|scope| {
        let handles: Vec<_> = nodes
            .chunks(chunk)
            .map(|ks| {
                scope.spawn(move || {
                    ks.iter().all(|&k| {
                        let x = g.node(k);
                        let xs: Spatial = [x[0], x[1], 0.0];
                        match causal_bounds(e, &xs, res) {
                            Some((lo, hi)) => {
                                let nu = g.values()[k];
                                nu > lo - HYP_CONTAINMENT_TOL && nu < hi + HYP_CONTAINMENT_TOL
                            }
                            None => false,
                        }
                    })
                })
            })
            .collect();
        handles.into_iter().all(|h| h.join().expect("containment worker panicked"))
    });
    Ok(AchronalCheck {
        area,
        bound: bound_a,
        ratio: area / bound_a.min(bound_b),
        contained,
        resolution: g.cells(),
        tail_bound: 0.0,
        bound_b: Some(bound_b),
    })
}

/// Height and domain of the flat disk spanning the boundary of the geodesic
/// ball of radius `delta` about `e0`: `t = cosh delta` over `|x| < sinh delta`.
pub fn spanning_disk(delta: f64, half_width: f64, cells: usize) -> Result<FlatGraph> {
    let t = delta.cosh();
    FlatGraph::from_fn(half_width, cells, |_| t)?.with_level_from(|x, nu| nu * nu - x[0] * x[0] - x[1] * x[1] - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{SpacetimeVector, SphereGrid};
    use std::f64::consts::PI;
    use std::sync::Arc;

    #[test]
    fn unit_disk_in_unit_cone() {
        let g = FlatGraph::from_fn(1.2, 240, |_| 1.0).unwrap();
        let p = ConeProfile::constant(Arc::new(SphereGrid::circle(256)), 1.0).unwrap();
        let c = check_cone_graph(&g, &p).unwrap();
        assert!(c.contained);
        assert!((c.area - PI).abs() < 1e-3 && (c.bound - PI).abs() < 1e-12, "{c:?}");
    }

    #[test]
    fn raised_disk_leaves_the_cone() {
        let g = FlatGraph::from_fn(1.2, 60, |_| 1.9).unwrap();
        let p = ConeProfile::constant(Arc::new(SphereGrid::circle(64)), 1.0).unwrap();
        assert!(!check_cone_graph(&g, &p).unwrap().contained);
    }

    #[test]
    fn spanning_disk_meets_both_bounds() {
        let d = 0.7f64;
        let g = spanning_disk(d, 1.0, 200).unwrap();
        let e = HyperbolicSet::ball(Dim::Two, SpacetimeVector::time_unit(), d).unwrap();
        let res = HypDodResolution::new(Arc::new(SphereGrid::circle(128)), 32);
        let c = check_hyperboloid_graph(&g, &e, &res).unwrap();
        let exact = PI * d.sinh().powi(2);
        assert!(c.contained);
        assert!((c.area - exact).abs() < 1e-3 * exact, "{c:?}");
        assert!((c.bound - exact).abs() < 1e-9 && (c.bound_b.unwrap() - exact).abs() < 1e-9);
    }
}
