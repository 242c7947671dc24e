//! Points and sets on the unit hyperboloid `S = { -t^2 + |x|^2 = -1, t > 0 }`.

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::vector::{norm, scale};
use crate::geometry::{eta, Dim, ReflectionPlane, Side, SpacetimeVector, Spatial, SphereGrid};

/// Relative residual allowed for points claimed to lie on the hyperboloid.
pub const ON_HYPERBOLOID_TOL: f64 = 1e-10;

/// Point at geodesic distance `s` from `e0` in direction `dir`.
pub fn hyp_point(s: f64, dir: &Spatial) -> SpacetimeVector {
    SpacetimeVector::new(s.cosh(), scale(dir, s.sinh()))
}

/// Lift of a spatial point onto the hyperboloid.
pub fn lift(x: &Spatial) -> SpacetimeVector {
    SpacetimeVector::new((1.0 + x.iter().map(|v| v * v).sum::<f64>()).sqrt(), *x)
}

fn check_on(p: &SpacetimeVector) -> Result<()> {
    let r = eta(p, p) + 1.0;
    if r.abs() > ON_HYPERBOLOID_TOL * (1.0 + p.euclid_norm_sq()) || p.t <= 0.0 {
        return Err(Error::NotOnHyperboloid(r));
    }
    Ok(())
}

pub fn hyp_distance(p: &SpacetimeVector, q: &SpacetimeVector) -> Result<f64> {
    check_on(p)?;
    check_on(q)?;
    Ok((-eta(p, q)).max(1.0).acosh())
}

/// Geodesic polar coordinates `(s, direction)` of a point on the hyperboloid.
pub fn polar_coordinates(p: &SpacetimeVector) -> (f64, Spatial) {
    let r = norm(&p.x);
    let s = r.asinh();
    if r > 0.0 {
        (s, scale(&p.x, 1.0 / r))
    } else {
        (0.0, [1.0, 0.0, 0.0])
    }
}

/// `|B_delta| = n w_n int_0^delta sinh^{n-1}`.
pub fn hyp_ball_volume(dim: Dim, delta: f64) -> f64 {
    match dim {
        Dim::Two => 2.0 * std::f64::consts::PI * (delta.cosh() - 1.0),
        Dim::Three => std::f64::consts::PI * ((2.0 * delta).sinh() - 2.0 * delta),
    }
}

pub fn hyp_ball_perimeter(dim: Dim, delta: f64) -> f64 {
    dim.sphere_area() * delta.sinh().powi(dim.n() as i32 - 1)
}

/// Radius of the geodesic ball with the given volume.
pub fn ball_radius_for_volume(dim: Dim, volume: f64) -> f64 {
    if volume <= 0.0 {
        return 0.0;
    }
    let mut hi = 1.0;
    while hyp_ball_volume(dim, hi) < volume {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hyp_ball_volume(dim, mid) < volume {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Volume of the causal diamond of a geodesic ball: `2 w_n sinh^{n+1}(delta) / (n + 1)`.
pub fn ball_diamond_volume(dim: Dim, delta: f64) -> f64 {
    let n = dim.n() as f64;
    2.0 * dim.omega() * delta.sinh().powf(n + 1.0) / (n + 1.0)
}

/// Upper bound on `|D(E)|` in terms of `|E|` alone:
/// `(|E| / (n + 1)) (e^{(n+1) d} - e^{-(n+1) d})` with `|B_d| = |E|`.
pub fn exponential_volume_bound(volume: f64, dim: Dim) -> f64 {
    let n1 = dim.n() as f64 + 1.0;
    let d = ball_radius_for_volume(dim, volume);
    volume / n1 * ((n1 * d).exp() - (-n1 * d).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeodesicBall {
    pub center: SpacetimeVector,
    pub radius: f64,
}

impl GeodesicBall {
    pub fn new(center: SpacetimeVector, radius: f64) -> Result<Self> {
        check_on(&center)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidProfile(format!("ball radius must be positive, got {radius}")));
        }
        Ok(GeodesicBall { center, radius })
    }

    pub fn at(s: f64, dir: &Spatial, radius: f64) -> Result<Self> {
        Self::new(hyp_point(s, dir), radius)
    }

    pub fn contains(&self, p: &SpacetimeVector) -> bool {
        -eta(p, &self.center) < self.radius.cosh()
    }
}

/// Occupancy over geodesic polar cells `[k ds, (k+1) ds) x (Voronoi cell of node i)`.
#[derive(Clone, Debug)]
pub struct HyperbolicGrid {
    s_max: f64,
    radial: usize,
    sphere: Arc<SphereGrid>,
    occupied: Vec<bool>,
    frontier: OnceLock<Frontier>,
}

impl PartialEq for HyperbolicGrid {
    fn eq(&self, other: &Self) -> bool {
        self.s_max == other.s_max
            && self.radial == other.radial
            && self.sphere == other.sphere
            && self.occupied == other.occupied
    }
}

/// Points separating empty cells from occupied ones, and whether the set
/// touches `s_max`.
#[derive(Clone, Debug)]
pub(crate) struct Frontier {
    pub(crate) boundary: Vec<SpacetimeVector>,
    pub(crate) reaches_edge: bool,
}

impl HyperbolicGrid {
    pub fn empty(s_max: f64, radial: usize, sphere: Arc<SphereGrid>) -> Result<Self> {
        if !(s_max > 0.0) || radial == 0 {
            return Err(Error::InvalidProfile("grid needs s_max > 0 and at least one shell".into()));
        }
        let occupied = vec![false; radial * sphere.len()];
        Ok(HyperbolicGrid { s_max, radial, sphere, occupied, frontier: OnceLock::new() })
    }

    /// Occupies the cells whose centres satisfy `inside`.
    pub fn from_fn(
        s_max: f64,
        radial: usize,
        sphere: Arc<SphereGrid>,
        inside: impl Fn(&SpacetimeVector) -> bool,
    ) -> Result<Self> {
        let mut g = Self::empty(s_max, radial, sphere)?;
        for c in 0..g.occupied.len() {
            g.occupied[c] = inside(&g.center(c));
        }
        Ok(g)
    }

    pub fn from_occupancy(s_max: f64, radial: usize, sphere: Arc<SphereGrid>, occupied: Vec<bool>) -> Result<Self> {
        let mut g = Self::empty(s_max, radial, sphere)?;
        if occupied.len() != g.occupied.len() {
            return Err(Error::GridMismatch);
        }
        g.occupied = occupied;
        Ok(g)
    }

    pub fn dim(&self) -> Dim {
        self.sphere.dim()
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn radial(&self) -> usize {
        self.radial
    }

    pub fn sphere(&self) -> &Arc<SphereGrid> {
        &self.sphere
    }

    pub fn occupied(&self) -> &[bool] {
        &self.occupied
    }

    pub fn ds(&self) -> f64 {
        self.s_max / self.radial as f64
    }

    pub fn len(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }

    pub fn center(&self, cell: usize) -> SpacetimeVector {
        let (k, i) = (cell / self.sphere.len(), cell % self.sphere.len());
        hyp_point((k as f64 + 0.5) * self.ds(), self.sphere.node(i))
    }

    /// Cell containing a hyperboloid point, or `None` beyond `s_max`.
    pub fn cell_of(&self, p: &SpacetimeVector) -> Option<usize> {
        let (s, dir) = polar_coordinates(p);
        let k = (s / self.ds()).floor();
        if !(k < self.radial as f64) {
            return None;
        }
        Some(k as usize * self.sphere.len() + self.sphere.nearest(&dir))
    }

    fn shell_measure(&self, k: usize) -> f64 {
        let (a, b) = (k as f64 * self.ds(), (k + 1) as f64 * self.ds());
        match self.dim() {
            Dim::Two => b.cosh() - a.cosh(),
            Dim::Three => ((2.0 * b).sinh() - (2.0 * a).sinh()) / 4.0 - (b - a) / 2.0,
        }
    }

    /// Hyperbolic area of one cell.
    pub fn cell_measure(&self, cell: usize) -> f64 {
        let (k, i) = (cell / self.sphere.len(), cell % self.sphere.len());
        self.shell_measure(k) * self.sphere.weights()[i]
    }

    pub fn volume(&self) -> f64 {
        (0..self.len()).filter(|&c| self.occupied[c]).map(|c| self.cell_measure(c)).sum()
    }

    pub fn contains(&self, p: &SpacetimeVector) -> bool {
        self.cell_of(p).map(|c| self.occupied[c]).unwrap_or(false)
    }

    /// Perimeter of a set made of whole shells, from the shell boundaries.
    pub fn perimeter(&self) -> Result<f64> {
        let m = self.sphere.len();
        let mut shells = Vec::with_capacity(self.radial);
        for k in 0..self.radial {
            let row = &self.occupied[k * m..(k + 1) * m];
            if row.iter().any(|b| *b != row[0]) {
                return Err(Error::PerimeterUnavailable);
            }
            shells.push(row[0]);
        }
        let dim = self.dim();
        let mut total = 0.0;
        for k in 0..self.radial {
            let below = if k == 0 { shells[0] } else { shells[k - 1] };
            if shells[k] != below {
                total += hyp_ball_perimeter(dim, k as f64 * self.ds());
            }
        }
        if shells[self.radial - 1] {
            total += hyp_ball_perimeter(dim, self.s_max);
        }
        Ok(total)
    }

    /// A connected region around an occupied cell lies in the set when it
    /// avoids the boundary points and, if the set reaches `s_max`, stays
    /// inside it. Boundary points are hyperboloid midpoints between each empty
    /// cell centre and its occupied neighbours.
    pub(crate) fn frontier(&self) -> &Frontier {
        self.frontier.get_or_init(|| {
            let m = self.sphere.len();
            let mut boundary = Vec::new();
            let mut push = |a: &SpacetimeVector, b: &SpacetimeVector| {
                let v = *a + *b;
                boundary.push(v * (1.0 / (-v.square()).sqrt()));
            };
            for c in 0..self.len() {
                if self.occupied[c] {
                    continue;
                }
                let (k, i) = (c / m, c % m);
                let here = self.center(c);
                let mut near: Vec<usize> = self.sphere.neighbors(i).iter().map(|&j| k * m + j).collect();
                if k > 0 {
                    near.push(c - m);
                }
                if k + 1 < self.radial {
                    near.push(c + m);
                }
                if k == 0 {
                    // Across the pole every first-shell cell is adjacent.
                    near.extend(0..m);
                }
                for d in near {
                    if self.occupied[d] {
                        push(&here, &self.center(d));
                    }
                }
            }
            let reaches_edge = self.occupied[(self.radial - 1) * m..].iter().any(|b| *b);
            Frontier { boundary, reaches_edge }
        })
    }

    /// Largest geodesic distance from `e0` reached by an occupied cell.
    pub fn extent(&self) -> f64 {
        let m = self.sphere.len();
        (0..self.radial)
            .rev()
            .find(|k| self.occupied[k * m..(k + 1) * m].iter().any(|b| *b))
            .map(|k| (k + 1) as f64 * self.ds())
            .unwrap_or(0.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum HyperbolicSet {
    /// Union of geodesic balls; pairs must be disjoint or nested.
    Balls {
        dim: Dim,
        balls: Vec<GeodesicBall>,
    },
    Grid(HyperbolicGrid),
}

impl HyperbolicSet {
    pub fn ball(dim: Dim, center: SpacetimeVector, radius: f64) -> Result<Self> {
        Ok(HyperbolicSet::Balls { dim, balls: vec![GeodesicBall::new(center, radius)?] })
    }

    pub fn balls(dim: Dim, balls: Vec<GeodesicBall>) -> Self {
        HyperbolicSet::Balls { dim, balls }
    }

    pub fn dim(&self) -> Dim {
        match self {
            HyperbolicSet::Balls { dim, .. } => *dim,
            HyperbolicSet::Grid(g) => g.dim(),
        }
    }

    pub fn contains(&self, p: &SpacetimeVector) -> bool {
        match self {
            HyperbolicSet::Balls { balls, .. } => balls.iter().any(|b| b.contains(p)),
            HyperbolicSet::Grid(g) => g.contains(p),
        }
    }

    /// Largest geodesic distance from `e0` of a point of the set.
    pub fn extent(&self) -> f64 {
        match self {
            HyperbolicSet::Balls { balls, .. } => balls
                .iter()
                .map(|b| (-eta(&b.center, &SpacetimeVector::time_unit())).max(1.0).acosh() + b.radius)
                .fold(0.0, f64::max),
            HyperbolicSet::Grid(g) => g.extent(),
        }
    }

    /// Indices of balls not contained in another ball; errors on partial overlaps.
    fn outer_balls(balls: &[GeodesicBall]) -> Result<Vec<usize>> {
        let mut outer = Vec::new();
        for i in 0..balls.len() {
            let mut inside_other = false;
            for j in 0..balls.len() {
                if i == j {
                    continue;
                }
                let d = (-eta(&balls[i].center, &balls[j].center)).max(1.0).acosh();
                let (ri, rj) = (balls[i].radius, balls[j].radius);
                if d >= ri + rj {
                    continue;
                }
                if d + ri <= rj && (d + rj > ri || i > j) {
                    inside_other = true;
                } else if d + rj > ri {
                    return Err(Error::OverlappingBalls(i.min(j), i.max(j)));
                }
            }
            if !inside_other {
                outer.push(i);
            }
        }
        Ok(outer)
    }

    pub fn is_empty(&self) -> bool {
        match self {
            HyperbolicSet::Balls { balls, .. } => balls.is_empty(),
            HyperbolicSet::Grid(g) => !g.occupied.iter().any(|b| *b),
        }
    }
}

pub fn hyp_volume(e: &HyperbolicSet) -> Result<f64> {
    match e {
        HyperbolicSet::Balls { dim, balls } => {
            let outer = HyperbolicSet::outer_balls(balls)?;
            Ok(outer.iter().map(|&i| hyp_ball_volume(*dim, balls[i].radius)).sum())
        }
        HyperbolicSet::Grid(g) => Ok(g.volume()),
    }
}

pub fn hyp_perimeter(e: &HyperbolicSet) -> Result<f64> {
    match e {
        HyperbolicSet::Balls { dim, balls } => {
            let outer = HyperbolicSet::outer_balls(balls)?;
            Ok(outer.iter().map(|&i| hyp_ball_perimeter(*dim, balls[i].radius)).sum())
        }
        HyperbolicSet::Grid(g) => g.perimeter(),
    }
}

/// Polarisation of a grid set restricted to the hyperboloid. Cells whose
/// centre maps beyond `s_max` count as empty, unless they are occupied.
pub fn hyp_polarize(e: &HyperbolicGrid, plane: &ReflectionPlane) -> Result<HyperbolicGrid> {
    let mut out = e.occupied.clone();
    for c in 0..e.len() {
        let p = e.center(c);
        let image = e.cell_of(&plane.reflect(&p));
        if e.occupied[c] && image.is_none() {
            return Err(Error::ReflectionOutOfBox);
        }
        let here = e.occupied[c];
        let there = image.map(|j| e.occupied[j]).unwrap_or(false);
        out[c] = match plane.side_of(&p) {
            Side::Plus => here || there,
            Side::Minus => here && there,
            Side::On => here,
        };
    }
    HyperbolicGrid::from_occupancy(e.s_max, e.radial, e.sphere.clone(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TimelikeHyperplane;
    use approx::assert_relative_eq;

    #[test]
    fn points_and_distances() {
        let p = hyp_point(1.0, &[1.0, 0.0, 0.0]);
        assert_relative_eq!(eta(&p, &p), -1.0, epsilon = 1e-14);
        let e0 = SpacetimeVector::time_unit();
        assert_relative_eq!(hyp_distance(&e0, &hyp_point(0.7, &[0.6, 0.8, 0.0])).unwrap(), 0.7, epsilon = 1e-12);
        assert_eq!(hyp_distance(&e0, &e0).unwrap(), 0.0);
        assert!(matches!(hyp_distance(&e0, &SpacetimeVector::new(2.0, [0.0; 3])), Err(Error::NotOnHyperboloid(_))));
    }

    #[test]
    fn ball_formulas() {
        assert_relative_eq!(hyp_ball_volume(Dim::Two, 0.7), 1.60327, epsilon = 1e-5);
        assert_relative_eq!(hyp_ball_perimeter(Dim::Two, 0.7), 4.76633, epsilon = 1e-5);
        for dim in [Dim::Two, Dim::Three] {
            let d = ball_radius_for_volume(dim, hyp_ball_volume(dim, 0.9));
            assert_relative_eq!(d, 0.9, epsilon = 1e-12);
            // Perimeter is the derivative of volume.
            let h = 1e-6;
            let dv = (hyp_ball_volume(dim, 0.9 + h) - hyp_ball_volume(dim, 0.9 - h)) / (2.0 * h);
            assert_relative_eq!(dv, hyp_ball_perimeter(dim, 0.9), max_relative = 1e-8);
        }
        let v = hyp_ball_volume(Dim::Two, 0.7);
        assert_relative_eq!(
            exponential_volume_bound(v, Dim::Two),
            v / 3.0 * (2.1f64.exp() - (-2.1f64).exp()),
            max_relative = 1e-10
        );
        assert!(exponential_volume_bound(1e-12, Dim::Two) < 1e-11);
    }

    #[test]
    fn grid_ball_volume() {
        let g = Arc::new(SphereGrid::circle(64));
        let e0 = SpacetimeVector::time_unit();
        let grid = HyperbolicGrid::from_fn(1.4, 200, g, |p| -eta(p, &e0) < 0.7f64.cosh()).unwrap();
        assert_relative_eq!(grid.volume(), hyp_ball_volume(Dim::Two, 0.7), max_relative = 1e-3);
        assert_relative_eq!(grid.perimeter().unwrap(), hyp_ball_perimeter(Dim::Two, 0.7), max_relative = 1e-3);
        assert!((grid.extent() - 0.7).abs() < 1e-9);
    }

    #[test]
    fn ball_union_overlaps() {
        let a = GeodesicBall::at(0.0, &[1.0, 0.0, 0.0], 0.4).unwrap();
        let b = GeodesicBall::at(2.0, &[1.0, 0.0, 0.0], 0.4).unwrap();
        let c = GeodesicBall::at(0.1, &[0.0, 1.0, 0.0], 0.2).unwrap();
        let d = GeodesicBall::at(0.3, &[1.0, 0.0, 0.0], 0.4).unwrap();
        let disjoint = HyperbolicSet::balls(Dim::Two, vec![a, b]);
        assert_relative_eq!(hyp_volume(&disjoint).unwrap(), 2.0 * hyp_ball_volume(Dim::Two, 0.4));
        let nested = HyperbolicSet::balls(Dim::Two, vec![a, c]);
        assert_relative_eq!(hyp_perimeter(&nested).unwrap(), hyp_ball_perimeter(Dim::Two, 0.4));
        let same = HyperbolicSet::balls(Dim::Two, vec![a, a]);
        assert_relative_eq!(hyp_volume(&same).unwrap(), hyp_ball_volume(Dim::Two, 0.4));
        let bad = HyperbolicSet::balls(Dim::Two, vec![a, d]);
        assert!(matches!(hyp_volume(&bad), Err(Error::OverlappingBalls(0, 1))));
    }

    #[test]
    fn grid_polarisation_of_symmetric_set() {
        let g = Arc::new(SphereGrid::circle(64));
        let e0 = SpacetimeVector::time_unit();
        let grid = HyperbolicGrid::from_fn(2.0, 40, g, |p| -eta(p, &e0) < 0.8f64.cosh()).unwrap();
        let h = TimelikeHyperplane::from_normal(SpacetimeVector::spatial_unit(2)).unwrap();
        let plane = ReflectionPlane::new(h, SpacetimeVector::new(1.0, [0.0, 0.5, 0.0])).unwrap();
        assert_eq!(hyp_polarize(&grid, &plane).unwrap(), grid);
    }
}
