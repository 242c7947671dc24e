//! Domains of dependence of hyperboloid sets.
//!
//! Over a spatial point x whose lift lies in E, D(E) is the segment
//! `u_-(x) < t < u_+(x)`. Above the hyperboloid a point belongs to D(E) when
//! its past cone meets S inside E; below, when its future cone does. Both
//! traces are balls around the lift of x, so each bound is a bisection in t.

use std::sync::Arc;

use serde::Serialize;

use super::set::{exponential_volume_bound, hyp_perimeter, hyp_volume, lift, HyperbolicGrid, HyperbolicSet};
use crate::error::Result;
use crate::geometry::vector::{add, dot, norm, scale};
use crate::geometry::{eta, Dim, SpacetimeVector, Spatial, SphereGrid};

#[derive(Clone, Debug)]
pub struct HypDodResolution {
    /// Directions used both for the trace rings and the spatial quadrature.
    pub directions: Arc<SphereGrid>,
    pub radial_nodes: usize,
    /// Bisection tolerance in t.
    pub t_tol: f64,
}

impl HypDodResolution {
    pub fn new(directions: Arc<SphereGrid>, radial_nodes: usize) -> Self {
        HypDodResolution { directions, radial_nodes, t_tol: 1e-6 }
    }
}

/// Trace of the past (`future = false`) or future cone of `(t, x)` on S:
/// the chart radius in direction `w` from `x`.
fn trace_radius(t: f64, x: &Spatial, w: &Spatial, future: bool) -> f64 {
    let r2 = dot(x, x);
    let xw = dot(x, w);
    if future {
        (1.0 + r2 - t * t) / (2.0 * (t - xw))
    } else {
        (t * t - r2 - 1.0) / (2.0 * (t + xw))
    }
}

fn trace_inside(e: &HyperbolicSet, t: f64, x: &Spatial, future: bool, dirs: &SphereGrid) -> bool {
    match e {
        // Balls are convex and pairwise disjoint, so the boundary ring decides.
        HyperbolicSet::Balls { .. } => dirs.nodes().iter().all(|w| {
            let rho = trace_radius(t, x, w, future);
            rho.is_finite() && rho >= 0.0 && e.contains(&lift(&add(x, &scale(w, rho))))
        }),
        HyperbolicSet::Grid(g) => grid_trace_inside(g, t, x),
    }
}

/// Either trace of `q = (t, x)` is the geodesic ball about `q / tau` with
/// `cosh R = (1 + tau^2) / (2 tau)`, `tau` the proper time of q. It lies in a
/// grid set when it avoids the set's boundary points.
fn grid_trace_inside(g: &HyperbolicGrid, t: f64, x: &Spatial) -> bool {
    let tau2 = t * t - dot(x, x);
    if !(tau2 > 0.0) {
        return false;
    }
    let tau = tau2.sqrt();
    let center = SpacetimeVector::new(t / tau, scale(x, 1.0 / tau));
    let cosh_r = (1.0 + tau2) / (2.0 * tau);
    let f = g.frontier();
    if f.reaches_edge && center.t.max(1.0).acosh() + cosh_r.acosh() > g.s_max() {
        return false;
    }
    f.boundary.iter().all(|p| -eta(p, &center) > cosh_r)
}

/// `(u_-(x), u_+(x))` when the lift of `x` lies in E.
pub fn causal_bounds(e: &HyperbolicSet, x: &Spatial, res: &HypDodResolution) -> Option<(f64, f64)> {
    let h = lift(x).t;
    if !e.contains(&lift(x)) {
        return None;
    }
    let dirs = &res.directions;
    let (mut lo, mut hi) = (h, h + 1.0);
    let mut guard = 0;
    while trace_inside(e, hi, x, false, dirs) && guard < 64 {
        lo = hi;
        hi = h + 2.0 * (hi - h);
        guard += 1;
    }
    while hi - lo > res.t_tol {
        let mid = 0.5 * (lo + hi);
        if trace_inside(e, mid, x, false, dirs) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let upper = 0.5 * (lo + hi);
    // At t = |x| the future trace is unbounded, so it starts outside E.
    let (mut lo, mut hi) = (norm(x), h);
    while hi - lo > res.t_tol {
        let mid = 0.5 * (lo + hi);
        if trace_inside(e, mid, x, true, dirs) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some((0.5 * (lo + hi), upper))
}

/// Radius along `dir` where membership of the lift changes, between `a` (with
/// membership `inside_a`) and `b`.
fn edge(e: &HyperbolicSet, dir: &Spatial, mut a: f64, mut b: f64, inside_a: bool) -> f64 {
    for _ in 0..100 {
        let mid = 0.5 * (a + b);
        if e.contains(&lift(&scale(dir, mid))) == inside_a {
            a = mid;
        } else {
            b = mid;
        }
        if (b - a).abs() < 1e-13 * (1.0 + b.abs()) {
            break;
        }
    }
    0.5 * (a + b)
}

fn radial_integral(e: &HyperbolicSet, dir: &Spatial, res: &HypDodResolution, r_box: f64) -> f64 {
    let m = res.radial_nodes;
    let dr = r_box / m as f64;
    let power = e.dim().n() as i32 - 1;
    let mut sum = 0.0;
    let mut j = 0;
    while j <= m {
        let r = j as f64 * dr;
        if !e.contains(&lift(&scale(dir, r))) {
            j += 1;
            continue;
        }
        // Maximal run of interior nodes j0..=j1, integrated by the trapezoid
        // rule; the integrand vanishes at the run's edges.
        let j0 = j;
        let mut values = Vec::new();
        while j <= m && e.contains(&lift(&scale(dir, j as f64 * dr))) {
            let x = scale(dir, j as f64 * dr);
            let gap = causal_bounds(e, &x, res).map(|(lo, hi)| (hi - lo).max(0.0)).unwrap_or(0.0);
            values.push(gap * (j as f64 * dr).powi(power));
            j += 1;
        }
        let j1 = j - 1;
        let inner: f64 = values.windows(2).map(|w| 0.5 * (w[0] + w[1]) * dr).sum();
        sum += inner;
        if j0 > 0 {
            let a = edge(e, dir, (j0 - 1) as f64 * dr, j0 as f64 * dr, false);
            sum += 0.5 * (j0 as f64 * dr - a) * values[0];
        }
        if j1 < m {
            let b = edge(e, dir, j1 as f64 * dr, (j1 + 1) as f64 * dr, true);
            sum += 0.5 * (b - j1 as f64 * dr) * values[values.len() - 1];
        }
    }
    sum
}

/// `|D(E)|` by polar quadrature of `u_+ - u_-` over the spatial projection of E.
pub fn hyp_dod_volume(e: &HyperbolicSet, res: &HypDodResolution) -> f64 {
    if e.is_empty() {
        return 0.0;
    }
    let r_box = e.extent().sinh() * (1.0 + 1e-9) + 1e-12;
    let dirs = res.directions.nodes();
    let weights = res.directions.weights();
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(dirs.len());
    let chunk = dirs.len().div_ceil(threads);
    let partial: Vec<Vec<f64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = dirs
            .chunks(chunk)
            .map(|ds| scope.spawn(move || ds.iter().map(|d| radial_integral(e, d, res, r_box)).collect::<Vec<f64>>()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("quadrature worker panicked")).collect()
    });
    partial.into_iter().flatten().zip(weights).map(|(v, w)| v * w).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HypIsoperimetricCheck {
    pub dod_volume: f64,
    pub set_volume: f64,
    pub perimeter: f64,
    /// `|D(E)| / (2 w_n / (n + 1))`.
    pub lhs: f64,
    /// `(P(E) / (n w_n))^{(n+1)/(n-1)}`.
    pub rhs: f64,
    pub ratio: f64,
    pub exponential_volume_bound: f64,
    pub exponential_bound_holds: bool,
}

pub fn hyp_isoperimetric_check(e: &HyperbolicSet, res: &HypDodResolution) -> Result<HypIsoperimetricCheck> {
    let dim = e.dim();
    let perimeter = hyp_perimeter(e)?;
    let set_volume = hyp_volume(e)?;
    let dod_volume = hyp_dod_volume(e, res);
    let n = dim.n() as f64;
    let lhs = dod_volume / (2.0 * dim.omega() / (n + 1.0));
    let rhs = (perimeter / dim.sphere_area()).powf((n + 1.0) / (n - 1.0));
    let bound = exponential_volume_bound(set_volume, dim);
    Ok(HypIsoperimetricCheck {
        dod_volume,
        set_volume,
        perimeter,
        lhs,
        rhs,
        ratio: lhs / rhs,
        exponential_volume_bound: bound,
        exponential_bound_holds: dod_volume <= bound,
    })
}

/// Default resolution: the circle or icosphere used elsewhere and 128 radial nodes.
pub fn default_hyp_resolution(dim: Dim) -> HypDodResolution {
    let dirs = match dim {
        Dim::Two => SphereGrid::circle(256),
        Dim::Three => SphereGrid::icosphere(3),
    };
    HypDodResolution::new(Arc::new(dirs), 128)
}
