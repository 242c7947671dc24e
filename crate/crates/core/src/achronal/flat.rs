//! Graphs `t = nu(x)` over a square lattice in the flat chart (n = 2).
//!
//! A graph carries node values of `nu` on `[-L, L]^2` and optional level
//! functions sampled at the same nodes; its domain is where every level
//! function is positive. Areas are computed cell by cell: each level function
//! is replaced by its least-squares plane on the cell, the square is clipped
//! by the resulting half-planes, and the clipped area is weighted by the
//! Lorentzian density `sqrt(1 - |grad nu|^2)`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative slack for the Lipschitz test on lattice differences.
pub const LIPSCHITZ_TOL: f64 = 1e-9;

pub type Point2 = [f64; 2];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlatGraph {
    half_width: f64,
    cells: usize,
    nu: Vec<f64>,
    levels: Vec<Vec<f64>>,
}

impl FlatGraph {
    pub fn new(half_width: f64, cells: usize, nu: Vec<f64>) -> Result<Self> {
        if !(half_width > 0.0) || cells < 2 {
            return Err(Error::ResolutionTooLow { got: cells, min: 2 });
        }
        if nu.len() != (cells + 1) * (cells + 1) {
            return Err(Error::GridMismatch);
        }
        if nu.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("graph values"));
        }
        Ok(FlatGraph { half_width, cells, nu, levels: Vec::new() })
    }

    pub fn from_fn(half_width: f64, cells: usize, nu: impl Fn(Point2) -> f64) -> Result<Self> {
        let h = 2.0 * half_width / cells as f64;
        let side = cells + 1;
        let values = (0..side * side)
            .map(|k| nu([-half_width + (k % side) as f64 * h, -half_width + (k / side) as f64 * h]))
            .collect();
        Self::new(half_width, cells, values)
    }

    /// Adds a level function; the domain shrinks to where it is positive.
    pub fn with_level(mut self, level: Vec<f64>) -> Result<Self> {
        if level.len() != self.nu.len() {
            return Err(Error::GridMismatch);
        }
        self.levels.push(level);
        Ok(self)
    }

    pub fn with_level_fn(self, level: impl Fn(Point2) -> f64) -> Result<Self> {
        let values = (0..self.nu.len()).map(|k| level(self.node(k))).collect();
        self.with_level(values)
    }

    /// Level built from the graph itself, e.g. `|(x, nu)| -> nu - |x|`.
    pub fn with_level_from(self, level: impl Fn(Point2, f64) -> f64) -> Result<Self> {
        let values = (0..self.nu.len()).map(|k| level(self.node(k), self.nu[k])).collect();
        self.with_level(values)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.cells as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.nu
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.nu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nu.is_empty()
    }

    pub fn side(&self) -> usize {
        self.cells + 1
    }

    pub fn node(&self, k: usize) -> Point2 {
        let side = self.side();
        let h = self.spacing();
        [-self.half_width + (k % side) as f64 * h, -self.half_width + (k / side) as f64 * h]
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i + self.side() * j
    }

    pub fn in_domain(&self, k: usize) -> bool {
        self.levels.iter().all(|l| l[k] > 0.0)
    }

    /// Same lattice and domain, new heights.
    pub fn with_values(&self, nu: Vec<f64>) -> Result<Self> {
        let mut g = Self::new(self.half_width, self.cells, nu)?;
        g.levels = self.levels.clone();
        Ok(g)
    }

    /// Same heights, domain replaced.
    pub fn with_levels(&self, levels: Vec<Vec<f64>>) -> Result<Self> {
        let mut g = Self::new(self.half_width, self.cells, self.nu.clone())?;
        for l in levels {
            g = g.with_level(l)?;
        }
        Ok(g)
    }

    pub fn same_lattice(&self, other: &FlatGraph) -> bool {
        self.half_width == other.half_width && self.cells == other.cells
    }

    /// Checks `|nu(p) - nu(q)| <= slope |p - q|` on lattice edges and cell
    /// diagonals touching the domain.
    pub fn check_lipschitz(&self, slope: f64) -> Result<()> {
        let side = self.side();
        let h = self.spacing();
        let steps: [(usize, usize, f64); 3] = [(1, 0, h), (0, 1, h), (1, 1, h * std::f64::consts::SQRT_2)];
        for j in 0..side {
            for i in 0..side {
                let a = self.index(i, j);
                for &(di, dj, dist) in &steps {
                    if i + di >= side || j + dj >= side {
                        continue;
                    }
                    let b = self.index(i + di, j + dj);
                    if !(self.in_domain(a) || self.in_domain(b)) {
                        continue;
                    }
                    let diff = (self.nu[a] - self.nu[b]).abs();
                    if diff > slope * dist * (1.0 + LIPSCHITZ_TOL) + 1e-14 {
                        return Err(Error::LipschitzViolation { index: a, slope: diff / dist });
                    }
                }
                if i + 1 < side && j >= 1 {
                    let a = self.index(i, j);
                    let b = self.index(i + 1, j - 1);
                    if self.in_domain(a) || self.in_domain(b) {
                        let diff = (self.nu[a] - self.nu[b]).abs();
                        let dist = h * std::f64::consts::SQRT_2;
                        if diff > slope * dist * (1.0 + LIPSCHITZ_TOL) + 1e-14 {
                            return Err(Error::LipschitzViolation { index: a, slope: diff / dist });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn corners(&self, ci: usize, cj: usize) -> [usize; 4] {
        [self.index(ci, cj), self.index(ci + 1, cj), self.index(ci, cj + 1), self.index(ci + 1, cj + 1)]
    }

    /// Averaged difference quotients of `values` on a cell.
    fn cell_gradient(&self, values: &[f64], c: &[usize; 4]) -> Point2 {
        let h = self.spacing();
        [
            (values[c[1]] - values[c[0]] + values[c[3]] - values[c[2]]) / (2.0 * h),
            (values[c[2]] - values[c[0]] + values[c[3]] - values[c[1]]) / (2.0 * h),
        ]
    }

    /// Area of the part of cell `(ci, cj)` where all `levels` are positive.
    fn covered(&self, ci: usize, cj: usize, levels: &[&[f64]]) -> f64 {
        let h = self.spacing();
        let x0 = -self.half_width + ci as f64 * h;
        let y0 = -self.half_width + cj as f64 * h;
        let c = self.corners(ci, cj);
        let mut poly: Vec<Point2> = vec![[x0, y0], [x0 + h, y0], [x0 + h, y0 + h], [x0, y0 + h]];
        let center = [x0 + 0.5 * h, y0 + 0.5 * h];
        for level in levels {
            let vals = [level[c[0]], level[c[1]], level[c[2]], level[c[3]]];
            if vals.iter().all(|v| *v > 0.0) {
                continue;
            }
            if vals.iter().all(|v| *v <= 0.0) {
                return 0.0;
            }
            let mean = 0.25 * vals.iter().sum::<f64>();
            let g = self.cell_gradient(level, &c);
            let phi = |p: &Point2| mean + g[0] * (p[0] - center[0]) + g[1] * (p[1] - center[1]);
            poly = clip_polygon(&poly, phi);
            if poly.len() < 3 {
                return 0.0;
            }
        }
        polygon_area(&poly)
    }

    /// Lorentzian area of the graph of `values` over the region where all
    /// `levels` are positive.
    pub(crate) fn area_of(&self, values: &[f64], levels: &[&[f64]]) -> f64 {
        let mut total = 0.0;
        for cj in 0..self.cells {
            for ci in 0..self.cells {
                let cover = self.covered(ci, cj, levels);
                if cover == 0.0 {
                    continue;
                }
                let g = self.cell_gradient(values, &self.corners(ci, cj));
                let density = (1.0 - g[0] * g[0] - g[1] * g[1]).max(0.0).sqrt();
                total += cover * density;
            }
        }
        total
    }

    fn level_refs(&self) -> Vec<&[f64]> {
        self.levels.iter().map(|l| l.as_slice()).collect()
    }

    /// Euclidean area of the domain.
    pub fn domain_area(&self) -> f64 {
        let levels = self.level_refs();
        let mut total = 0.0;
        for cj in 0..self.cells {
            for ci in 0..self.cells {
                total += self.covered(ci, cj, &levels);
            }
        }
        total
    }

    /// Domain with `nu > |x|` added: the part of the graph inside the future of the origin.
    pub fn future_part(&self) -> Result<FlatGraph> {
        self.clone().with_level_from(|x, nu| nu - (x[0] * x[0] + x[1] * x[1]).sqrt())
    }

    /// Boundary nodes of the domain: inside, with a lattice neighbour outside
    /// or on the edge of the box.
    pub fn domain_boundary(&self) -> Vec<usize> {
        let side = self.side();
        (0..self.len())
            .filter(|&k| {
                if !self.in_domain(k) {
                    return false;
                }
                let (i, j) = (k % side, k / side);
                if i == 0 || j == 0 || i + 1 == side || j + 1 == side {
                    return true;
                }
                [self.index(i - 1, j), self.index(i + 1, j), self.index(i, j - 1), self.index(i, j + 1)]
                    .iter()
                    .any(|&n| !self.in_domain(n))
            })
            .collect()
    }
}

/// Keeps the part of a convex polygon where `phi > 0`, with `phi` affine.
fn clip_polygon(poly: &[Point2], phi: impl Fn(&Point2) -> f64) -> Vec<Point2> {
    let mut out = Vec::with_capacity(poly.len() + 2);
    for k in 0..poly.len() {
        let a = &poly[k];
        let b = &poly[(k + 1) % poly.len()];
        let (fa, fb) = (phi(a), phi(b));
        if fa > 0.0 {
            out.push(*a);
        }
        if (fa > 0.0) != (fb > 0.0) {
            let s = fa / (fa - fb);
            out.push([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]);
        }
    }
    out
}

fn polygon_area(poly: &[Point2]) -> f64 {
    let mut twice = 0.0;
    for k in 0..poly.len() {
        let a = &poly[k];
        let b = &poly[(k + 1) % poly.len()];
        twice += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * twice.abs()
}

/// Lorentzian area `int sqrt(1 - |grad nu|^2)` over the graph's domain.
pub fn area_flat(g: &FlatGraph) -> Result<f64> {
    g.check_lipschitz(1.0)?;
    Ok(g.area_of(&g.nu, &g.level_refs()))
}

/// Extends the part of the graph above the null cone by null hypersurfaces:
/// outside the region `{nu > |x|}` of the domain the height becomes
/// `max(|x|, sup_p (nu(p) - |x - p|))` over the region's boundary nodes.
pub fn null_extension(g: &FlatGraph) -> Result<FlatGraph> {
    g.check_lipschitz(1.0)?;
    for k in 0..g.len() {
        let x = g.node(k);
        if g.in_domain(k) && g.nu[k] < (x[0] * x[0] + x[1] * x[1]).sqrt() - 1e-12 {
            return Err(Error::BelowCone(k));
        }
    }
    let region = g.future_part()?;
    let rim: Vec<(Point2, f64)> = region.domain_boundary().iter().map(|&k| (g.node(k), g.nu[k])).collect();
    let nu = (0..g.len())
        .map(|k| {
            let x = g.node(k);
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            if region.in_domain(k) {
                return g.nu[k];
            }
            rim.iter().map(|(p, v)| v - ((x[0] - p[0]).powi(2) + (x[1] - p[1]).powi(2)).sqrt()).fold(r, f64::max)
        })
        .collect();
    FlatGraph::new(g.half_width, g.cells, nu)
}

#[derive(Clone, Debug, Serialize)]
pub struct PushResult {
    /// Area of the input graph over its part inside the future of the origin.
    pub original_area: f64,
    /// Area of the part at or above the hyperboloid, plus the hyperboloid sheet.
    pub pushed_area: f64,
    pub upper_area: f64,
    pub sheet_area: f64,
    /// The graph restricted to where it is at or above the hyperboloid.
    pub upper: FlatGraph,
    /// Hyperboloid patch reached from the part below, as a graph `t = sqrt(1 + |x|^2)`.
    pub sheet: FlatGraph,
}

/// Replaces the part of the graph below the hyperboloid by the hyperboloid
/// points in its causal future. Over a column of that part the sheet is
/// reached directly; elsewhere `sqrt(1 + |y|^2) > min_p (nu(p) + |y - p|)`
/// over the rim of the lower part decides.
pub fn push_to_hyperboloid(g: &FlatGraph) -> Result<PushResult> {
    g.check_lipschitz(1.0)?;
    let region = g.future_part()?;
    let hyper: Vec<f64> = (0..g.len())
        .map(|k| {
            let x = g.node(k);
            (1.0 + x[0] * x[0] + x[1] * x[1]).sqrt()
        })
        .collect();
    let above: Vec<f64> = g.nu.iter().zip(&hyper).map(|(v, h)| v - h).collect();
    let below: Vec<f64> = above.iter().map(|v| -v).collect();
    let upper = region.clone().with_level(above)?;
    let lower = region.clone().with_level(below.clone())?;
    let rim: Vec<(Point2, f64)> = lower.domain_boundary().iter().map(|&k| (g.node(k), g.nu[k])).collect();
    let reach: Vec<f64> = (0..g.len())
        .map(|k| {
            if lower.in_domain(k) {
                return hyper[k] - g.nu[k];
            }
            let y = g.node(k);
            let w = rim
                .iter()
                .map(|(p, v)| v + ((y[0] - p[0]).powi(2) + (y[1] - p[1]).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            hyper[k] - w
        })
        .collect();
    let sheet = FlatGraph::new(g.half_width, g.cells, hyper)?.with_level(reach)?.with_level(below)?;
    let original_area = area_flat(&region)?;
    let upper_area = upper.area_of(&upper.nu, &upper.level_refs());
    let sheet_area = if rim.is_empty() { 0.0 } else { sheet.area_of(&sheet.nu, &sheet.level_refs()) };
    Ok(PushResult { original_area, pushed_area: upper_area + sheet_area, upper_area, sheet_area, upper, sheet })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn disk(r: f64) -> impl Fn(Point2) -> f64 {
        move |x| r * r - x[0] * x[0] - x[1] * x[1]
    }

    #[test]
    fn flat_disk_area() {
        let g = FlatGraph::from_fn(1.2, 240, |_| 0.7).unwrap().with_level_fn(disk(1.0)).unwrap();
        let a = area_flat(&g).unwrap();
        assert!((a - PI).abs() < 1e-3, "{a}");
        assert!((g.domain_area() - a).abs() < 1e-12);
    }

    #[test]
    fn tilted_plane_area() {
        let slope = 0.6;
        let g = FlatGraph::from_fn(1.2, 240, |x| 2.0 + slope * x[0]).unwrap().with_level_fn(disk(1.0)).unwrap();
        let a = area_flat(&g).unwrap();
        assert!((a - PI * (1.0 - slope * slope).sqrt()).abs() < 1e-3, "{a}");
    }

    #[test]
    fn null_cone_has_vanishing_area() {
        let coarse = FlatGraph::from_fn(1.2, 120, |x| (x[0] * x[0] + x[1] * x[1]).sqrt())
            .unwrap()
            .with_level_fn(disk(1.0))
            .unwrap();
        let fine = FlatGraph::from_fn(1.2, 480, |x| (x[0] * x[0] + x[1] * x[1]).sqrt())
            .unwrap()
            .with_level_fn(disk(1.0))
            .unwrap();
        let (a, b) = (area_flat(&coarse).unwrap(), area_flat(&fine).unwrap());
        assert!(b < 0.5 * a && b < 0.05, "{a} {b}");
        // Nothing of it lies strictly inside the future cone.
        assert_eq!(area_flat(&fine.future_part().unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn lipschitz_violation_is_reported() {
        let g = FlatGraph::from_fn(1.0, 20, |x| 1.2 * x[0]).unwrap();
        assert!(matches!(area_flat(&g), Err(Error::LipschitzViolation { .. })));
        let diag = FlatGraph::from_fn(1.0, 20, |x| 0.8 * (x[0] + x[1])).unwrap();
        assert!(matches!(area_flat(&diag), Err(Error::LipschitzViolation { .. })));
    }

    #[test]
    fn cap_extends_by_its_cone() {
        let g = FlatGraph::from_fn(1.5, 60, |_| 1.0).unwrap().with_level_fn(disk(1.0)).unwrap();
        let e = null_extension(&g).unwrap();
        for k in 0..e.len() {
            let x = e.node(k);
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            let expected = if r < 1.0 { 1.0 } else { r };
            assert!((e.values()[k] - expected).abs() < 2.0 * g.spacing(), "{x:?} {}", e.values()[k]);
        }
        // The null part has no area; what remains is an O(h) layer of cells
        // cut by the kink of `nu - |x|` at the rim.
        let mut last = f64::INFINITY;
        for cells in [60, 120, 240] {
            let g = FlatGraph::from_fn(1.5, cells, |_| 1.0).unwrap().with_level_fn(disk(1.0)).unwrap();
            let err = (area_flat(&null_extension(&g).unwrap()).unwrap() - PI).abs();
            assert!(err < 2.0 * PI * g.spacing() && err < 0.6 * last, "{cells}: {err}");
            last = err;
        }
    }

    #[test]
    fn graph_above_hyperboloid_is_not_pushed() {
        let g = FlatGraph::from_fn(1.2, 120, |_| 1.8).unwrap().with_level_fn(disk(1.0)).unwrap();
        let p = push_to_hyperboloid(&g).unwrap();
        assert_eq!(p.sheet_area, 0.0);
        assert!((p.pushed_area - p.original_area).abs() < 1e-12);
    }

    #[test]
    fn low_disk_is_pushed_up() {
        let g = FlatGraph::from_fn(2.0, 200, |_| 0.9).unwrap().with_level_fn(disk(0.8)).unwrap();
        let p = push_to_hyperboloid(&g).unwrap();
        assert!(p.upper_area == 0.0);
        assert!(p.pushed_area > p.original_area, "{p:?}");
    }
}
