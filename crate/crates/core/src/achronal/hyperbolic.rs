//! Graphs in the hyperbolic chart: the surface point over `(s, theta)` is
//! `f(s, theta) (cosh s, sinh s theta)`.

use std::sync::Arc;

use serde::Serialize;

use super::flat::FlatGraph;
use crate::error::{Error, Result};
use crate::geometry::vector::{dot, scale};
use crate::geometry::{Dim, Spatial, SphereGrid};
use crate::lightcone::{perimeter, ConeProfile};

/// Slack allowed on `|d log f|^2 <= 1`.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// Relative change of `f cosh s` over the last shell above which the tail is
/// declared unsettled.
pub const TAIL_SETTLED: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct HyperbolicGraph {
    s_max: f64,
    shells: usize,
    grid: Arc<SphereGrid>,
    values: Vec<f64>,
}

impl HyperbolicGraph {
    /// Values are stored shell by shell, `values[k * grid.len() + i]` at
    /// `s = k s_max / shells`, `k = 0..=shells`.
    pub fn new(s_max: f64, shells: usize, grid: Arc<SphereGrid>, values: Vec<f64>) -> Result<Self> {
        if shells < 4 {
            return Err(Error::ResolutionTooLow { got: shells, min: 4 });
        }
        if !(s_max > 0.0) {
            return Err(Error::InvalidProfile("s_max must be positive".into()));
        }
        if values.len() != (shells + 1) * grid.len() {
            return Err(Error::GridMismatch);
        }
        if let Some(k) = values.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidProfile(format!("value at index {k} is not positive")));
        }
        Ok(HyperbolicGraph { s_max, shells, grid, values })
    }

    pub fn from_fn(s_max: f64, shells: usize, grid: Arc<SphereGrid>, f: impl Fn(f64, &Spatial) -> f64) -> Result<Self> {
        let ds = s_max / shells as f64;
        let values = (0..=shells)
            .flat_map(|k| grid.nodes().iter().map(move |d| (k, *d)).collect::<Vec<_>>())
            .map(|(k, d)| f(k as f64 * ds, &d))
            .collect();
        Self::new(s_max, shells, grid, values)
    }

    pub fn dim(&self) -> Dim {
        self.grid.dim()
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn shells(&self) -> usize {
        self.shells
    }

    pub fn ds(&self) -> f64 {
        self.s_max / self.shells as f64
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, k: usize, i: usize) -> f64 {
        self.values[k * self.grid.len() + i]
    }

    /// Fourth-order derivative in s of `log f` at shell `k`, direction `i`.
    fn dlog_ds(&self, k: usize, i: usize) -> f64 {
        let m = self.shells;
        let l = |j: usize| self.value(j, i).ln();
        let h = self.ds();
        if k >= 2 && k + 2 <= m {
            (-l(k + 2) + 8.0 * l(k + 1) - 8.0 * l(k - 1) + l(k - 2)) / (12.0 * h)
        } else if k < 2 {
            let b = k;
            let c: [f64; 5] = if b == 0 { [-25.0, 48.0, -36.0, 16.0, -3.0] } else { [-3.0, -10.0, 18.0, -6.0, 1.0] };
            c.iter().enumerate().map(|(j, w)| w * l(j)).sum::<f64>() / (12.0 * h)
        } else {
            let c: [f64; 5] = if k == m { [-25.0, 48.0, -36.0, 16.0, -3.0] } else { [-3.0, -10.0, 18.0, -6.0, 1.0] };
            -c.iter().enumerate().map(|(j, w)| w * l(m - j)).sum::<f64>() / (12.0 * h)
        }
    }

    /// `|d log f|^2` in the hyperbolic metric for every node of shell `k > 0`.
    fn gradient_sq(&self, k: usize) -> Vec<f64> {
        let n = self.grid.len();
        let logs: Vec<f64> = (0..n).map(|i| self.value(k, i).ln()).collect();
        let sh = (k as f64 * self.ds()).sinh();
        (0..n)
            .map(|i| {
                let ds = self.dlog_ds(k, i);
                let tg = self.grid.tangent_gradient(&logs, i);
                ds * ds + dot(&tg, &tg) / (sh * sh)
            })
            .collect()
    }

    /// Checks the spacelike constraint at interior shells.
    pub fn check_constraint(&self) -> Result<()> {
        for k in 1..self.shells {
            for (i, q) in self.gradient_sq(k).into_iter().enumerate() {
                if q > 1.0 + CONSTRAINT_TOL {
                    return Err(Error::ConstraintViolation { index: k * self.grid.len() + i, value: q });
                }
            }
        }
        Ok(())
    }
}

/// Simpson weights when the shell count is even, trapezoid otherwise.
fn radial_weights(shells: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; shells + 1];
    if shells % 2 == 0 {
        for (k, wk) in w.iter_mut().enumerate() {
            *wk = h / 3.0
                * if k == 0 || k == shells {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
        }
    } else {
        w[0] = 0.5 * h;
        w[shells] = 0.5 * h;
    }
    w
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HyperbolicArea {
    pub area: f64,
    /// Bound on the area beyond `s_max`, assuming `f <= F sech s` there with
    /// `F` the largest value of `f cosh s` on the last shell.
    pub tail_bound: f64,
}

/// `int f^n sqrt(1 - |d log f|^2) sinh^{n-1}(s) ds dtheta` up to `s_max`.
pub fn area_hyperbolic(g: &HyperbolicGraph) -> Result<HyperbolicArea> {
    g.check_constraint()?;
    let dim = g.dim();
    let n = dim.n() as i32;
    let weights = radial_weights(g.shells, g.ds());
    let mu = g.grid.weights();
    let mut area = 0.0;
    for (k, wk) in weights.iter().enumerate().skip(1) {
        let s = k as f64 * g.ds();
        let jac = s.sinh().powi(n - 1);
        let q = g.gradient_sq(k);
        let shell: f64 = (0..g.grid.len()).map(|i| mu[i] * g.value(k, i).powi(n) * (1.0 - q[i]).max(0.0).sqrt()).sum();
        area += wk * jac * shell;
    }
    let last = g.shells;
    let big = (0..g.grid.len()).map(|i| g.value(last, i) * g.s_max.cosh()).fold(0.0, f64::max);
    let tail_bound = dim.sphere_area() * big.powi(n) * 2.0 * (-g.s_max).exp();
    Ok(HyperbolicArea { area, tail_bound })
}

/// Limit of `f(s, theta) cosh s` as s grows, extrapolated per direction from
/// the last three shells with Aitken's delta-squared step.
pub fn f_infinity(g: &HyperbolicGraph) -> Result<ConeProfile> {
    let m = g.shells;
    let ds = g.ds();
    let mut out = Vec::with_capacity(g.grid.len());
    for i in 0..g.grid.len() {
        let a = |k: usize| g.value(k, i) * (k as f64 * ds).cosh();
        let (g1, g2, g3) = (a(m - 2), a(m - 1), a(m));
        let change = (g3 - g2).abs() / g3.abs();
        if !(change < TAIL_SETTLED) {
            return Err(Error::NonConvergent(change));
        }
        let (d1, d2) = (g2 - g1, g3 - g2);
        let denom = d2 - d1;
        let ratio = if d1 != 0.0 { d2 / d1 } else { 0.0 };
        let limit = if d1 != 0.0 && denom != 0.0 && ratio > 0.0 && ratio < 1.0 { g3 - d2 * d2 / denom } else { g3 };
        out.push(limit);
    }
    ConeProfile::sampled(g.grid.clone(), out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InfinityCheck {
    pub area: f64,
    pub tail_bound: f64,
    pub infinity_perimeter: f64,
    /// `area / w_n`.
    pub lhs: f64,
    /// `(P(f_inf) / (n w_n))^{n/(n-1)}`.
    pub rhs: f64,
    pub ratio: f64,
}

pub fn check_infinity_perimeter(g: &HyperbolicGraph) -> Result<InfinityCheck> {
    let dim = g.dim();
    let a = area_hyperbolic(g)?;
    let finf = f_infinity(g)?;
    let p = perimeter(&finf);
    let n = dim.n() as f64;
    let lhs = a.area / dim.omega();
    let rhs = (p / dim.sphere_area()).powf(n / (n - 1.0));
    Ok(InfinityCheck { area: a.area, tail_bound: a.tail_bound, infinity_perimeter: p, lhs, rhs, ratio: lhs / rhs })
}

/// Bilinear interpolation of a flat graph; `None` outside the box.
fn sample_flat(g: &FlatGraph, x: [f64; 2]) -> Option<f64> {
    let h = g.spacing();
    let u = (x[0] + g.half_width()) / h;
    let v = (x[1] + g.half_width()) / h;
    let c = g.cells() as f64;
    if !(u >= 0.0 && v >= 0.0 && u <= c && v <= c) {
        return None;
    }
    let i = (u.floor() as usize).min(g.cells() - 1);
    let j = (v.floor() as usize).min(g.cells() - 1);
    let (a, b) = (u - i as f64, v - j as f64);
    let nu = g.values();
    let at = |di: usize, dj: usize| nu[g.index(i + di, j + dj)];
    Some((1.0 - a) * (1.0 - b) * at(0, 0) + a * (1.0 - b) * at(1, 0) + (1.0 - a) * b * at(0, 1) + a * b * at(1, 1))
}

/// Rewrites a flat graph (n = 2) in the hyperbolic chart by solving
/// `f cosh s = nu(f sinh s theta)` along each ray.
pub fn to_hyperbolic_chart(g: &FlatGraph, s_max: f64, shells: usize, grid: Arc<SphereGrid>) -> Result<HyperbolicGraph> {
    if grid.dim() != Dim::Two {
        return Err(Error::UnsupportedDimension(grid.dim().n()));
    }
    let ds = s_max / shells as f64;
    let mut values = Vec::with_capacity((shells + 1) * grid.len());
    for k in 0..=shells {
        let s = k as f64 * ds;
        for d in grid.nodes() {
            let dir = scale(d, s.sinh());
            let residual = |f: f64| -> Option<f64> { Some(f * s.cosh() - sample_flat(g, [f * dir[0], f * dir[1]])?) };
            let reach = (1.0 - 1e-12) * g.half_width() / dir[0].abs().max(dir[1].abs()).max(f64::MIN_POSITIVE);
            let (mut lo, mut hi) = (0.0, 1.0f64.min(reach));
            while residual(hi).unwrap_or(-1.0) < 0.0 {
                if hi >= reach {
                    return Err(Error::InvalidProfile("ray leaves the lattice box".into()));
                }
                lo = hi;
                hi = (2.0 * hi).min(reach);
            }
            if residual(lo).unwrap_or(0.0) >= 0.0 {
                return Err(Error::BelowCone(k));
            }
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if residual(mid).unwrap_or(1.0) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            values.push(0.5 * (lo + hi));
        }
    }
    HyperbolicGraph::new(s_max, shells, grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn family(c: f64, k: f64) -> impl Fn(f64, &Spatial) -> f64 {
        move |s, d| c / (s.cosh() + k * s.sinh() * d[0])
    }

    #[test]
    fn plane_area_and_limit() {
        let grid = Arc::new(SphereGrid::circle(64));
        let g = HyperbolicGraph::from_fn(10.0, 400, grid, family(0.8, 0.0)).unwrap();
        let a = area_hyperbolic(&g).unwrap();
        assert!((a.area - PI * 0.64).abs() < 1e-6, "{a:?}");
        assert!(a.tail_bound < 1e-3);
        let finf = f_infinity(&g).unwrap();
        assert!(finf.values().iter().all(|v| (v - 0.8).abs() < 1e-12));
        let c = check_infinity_perimeter(&g).unwrap();
        assert!((c.ratio - 1.0).abs() < 1e-6);
    }

    #[test]
    fn boosted_plane_family() {
        let grid = Arc::new(SphereGrid::circle(256));
        let g = HyperbolicGraph::from_fn(10.0, 1000, grid, family(1.0, 0.3)).unwrap();
        let a = area_hyperbolic(&g).unwrap();
        assert!((a.area - PI / (1.0 - 0.09)).abs() < 1e-3, "{a:?}");
        let finf = f_infinity(&g).unwrap();
        for (d, v) in finf.grid().nodes().iter().zip(finf.values()) {
            assert!((v - 1.0 / (1.0 + 0.3 * d[0])).abs() < 1e-4);
        }
    }

    #[test]
    fn sphere_plane_area() {
        let grid = Arc::new(SphereGrid::icosphere(3));
        let g = HyperbolicGraph::from_fn(10.0, 400, grid, family(0.9, 0.0)).unwrap();
        let a = area_hyperbolic(&g).unwrap();
        assert!((a.area - 4.0 * PI / 3.0 * 0.729).abs() < 1e-3, "{a:?}");
    }

    #[test]
    fn constraint_and_tail_errors() {
        let grid = Arc::new(SphereGrid::circle(32));
        let steep = HyperbolicGraph::from_fn(3.0, 60, grid.clone(), |s, _| (-1.5 * s).exp()).unwrap();
        assert!(matches!(area_hyperbolic(&steep), Err(Error::ConstraintViolation { .. })));
        let slow = HyperbolicGraph::from_fn(3.0, 60, grid, |s, _| (-0.5 * s).exp()).unwrap();
        assert!(matches!(f_infinity(&slow), Err(Error::NonConvergent(_))));
    }

    #[test]
    fn flat_cap_in_hyperbolic_chart() {
        let flat = FlatGraph::from_fn(1.5, 150, |_| 1.0).unwrap();
        let grid = Arc::new(SphereGrid::circle(64));
        let g = to_hyperbolic_chart(&flat, 8.0, 200, grid).unwrap();
        let finf = f_infinity(&g).unwrap();
        assert!(finf.values().iter().all(|v| (v - 1.0).abs() < 1e-6));
        assert!((perimeter(&finf) - 2.0 * PI).abs() < 1e-5);
        let a = area_hyperbolic(&g).unwrap();
        assert!((a.area - PI).abs() < 1e-3 * PI, "{a:?}");
    }
}
