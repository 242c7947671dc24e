//! Quadrature grids on the unit sphere of directions.
//!
//! For n = 2 the grid is a set of angles on the circle (uniform or read from
//! a file); for n = 3 it is a subdivided icosahedron whose node weights are the
//! areas of the spherical Voronoi cells.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use super::vector::{add, cross, dot, normalize, scale, sub, Dim, Spatial};
use crate::error::{Error, Result};

pub const MIN_RESOLUTION: usize = 8;

/// Interpolation stencil: up to three nodes with barycentric weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stencil {
    pub idx: [usize; 3],
    pub w: [f64; 3],
}

impl Stencil {
    pub fn apply(&self, values: &[f64]) -> f64 {
        self.w[0] * values[self.idx[0]] + self.w[1] * values[self.idx[1]] + self.w[2] * values[self.idx[2]]
    }

    /// The node carrying the largest weight.
    pub fn dominant(&self) -> usize {
        let mut best = 0;
        for k in 1..3 {
            if self.w[k] > self.w[best] {
                best = k;
            }
        }
        self.idx[best]
    }
}

#[derive(Clone, Debug)]
enum Topology {
    Circle { angles: Vec<f64>, uniform: bool },
    Mesh { level: u32, triangles: Vec<[usize; 3]>, across: Vec<[usize; 3]> },
}

#[derive(Clone, Debug)]
pub struct SphereGrid {
    dim: Dim,
    nodes: Vec<Spatial>,
    weights: Vec<f64>,
    neighbors: Vec<Vec<usize>>,
    topo: Topology,
}

impl PartialEq for SphereGrid {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.dim == other.dim && self.nodes == other.nodes && self.weights == other.weights)
    }
}

/// Grid for dimension `dim`. For n = 2 `resolution` is the number of equal
/// angles; for n = 3 it is a minimum node count, and the coarsest icosphere
/// with at least that many nodes is used.
pub fn sphere_grid(dim: Dim, resolution: usize) -> Result<SphereGrid> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::ResolutionTooLow { got: resolution, min: MIN_RESOLUTION });
    }
    match dim {
        Dim::Two => Ok(SphereGrid::circle(resolution)),
        Dim::Three => {
            let mut level = 0;
            while icosphere_node_count(level) < resolution {
                level += 1;
            }
            Ok(SphereGrid::icosphere(level))
        }
    }
}

pub fn icosphere_node_count(level: u32) -> usize {
    10 * 4usize.pow(level) + 2
}

impl SphereGrid {
    /// `n` equally spaced angles starting at 0.
    pub fn circle(n: usize) -> SphereGrid {
        let angles: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
        let mut g = Self::circle_from_sorted(angles);
        if let Topology::Circle { uniform, .. } = &mut g.topo {
            *uniform = true;
        }
        g
    }

    /// Circle grid from strictly increasing angles in `[0, 2pi)`.
    pub fn circle_from_angles(angles: Vec<f64>) -> Result<SphereGrid> {
        if angles.len() < MIN_RESOLUTION {
            return Err(Error::ResolutionTooLow { got: angles.len(), min: MIN_RESOLUTION });
        }
        for (i, a) in angles.iter().enumerate() {
            if !a.is_finite() || *a < 0.0 || *a >= TAU {
                return Err(Error::InvalidProfile(format!("angle {a} outside [0, 2pi)")));
            }
            if i > 0 && *a <= angles[i - 1] {
                return Err(Error::InvalidProfile("angles must be strictly increasing".into()));
            }
        }
        Ok(Self::circle_from_sorted(angles))
    }

    fn circle_from_sorted(angles: Vec<f64>) -> SphereGrid {
        let n = angles.len();
        let nodes = angles.iter().map(|a| [a.cos(), a.sin(), 0.0]).collect();
        let gap = |i: usize| {
            let next = if i + 1 == n { angles[0] + TAU } else { angles[i + 1] };
            next - angles[i]
        };
        let weights = (0..n).map(|i| 0.5 * (gap(i) + gap((i + n - 1) % n))).collect();
        let neighbors = (0..n).map(|i| vec![(i + n - 1) % n, (i + 1) % n]).collect();
        SphereGrid { dim: Dim::Two, nodes, weights, neighbors, topo: Topology::Circle { angles, uniform: false } }
    }

    /// Icosahedron subdivided `level` times, nodes projected to the sphere.
    pub fn icosphere(level: u32) -> SphereGrid {
        let (nodes, triangles) = build_icosphere(level);
        let mut edge_tris: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
                edge_tris.entry((a.min(b), a.max(b))).or_default().push(t);
            }
        }
        let mut across = vec![[usize::MAX; 3]; triangles.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
                let ts = &edge_tris[&(a.min(b), a.max(b))];
                across[t][k] = if ts[0] == t { ts[1] } else { ts[0] };
            }
        }
        let mut neighbors = vec![Vec::new(); nodes.len()];
        for &(a, b) in edge_tris.keys() {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for nb in neighbors.iter_mut() {
            nb.sort_unstable();
        }
        let weights = voronoi_weights(&nodes, &triangles);
        SphereGrid { dim: Dim::Three, nodes, weights, neighbors, topo: Topology::Mesh { level, triangles, across } }
    }

    /// Rebuilds an icosphere grid from explicit node positions, which must
    /// match some subdivision level up to 1e-9.
    pub fn icosphere_from_nodes(nodes: &[Spatial]) -> Result<SphereGrid> {
        let mut level = 0;
        while icosphere_node_count(level) < nodes.len() {
            level += 1;
        }
        if icosphere_node_count(level) != nodes.len() {
            return Err(Error::InvalidProfile(format!("{} nodes is not an icosphere node count", nodes.len())));
        }
        let g = SphereGrid::icosphere(level);
        for (i, (a, b)) in nodes.iter().zip(&g.nodes).enumerate() {
            if norm_diff(a, b) > 1e-9 {
                return Err(Error::InvalidProfile(format!("node {i} does not match the level-{level} icosphere")));
            }
        }
        Ok(g)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Spatial] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Spatial {
        &self.nodes[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Angles of a circle grid; `None` for the icosphere.
    pub fn angles(&self) -> Option<&[f64]> {
        match &self.topo {
            Topology::Circle { angles, .. } => Some(angles),
            Topology::Mesh { .. } => None,
        }
    }

    pub fn icosphere_level(&self) -> Option<u32> {
        match &self.topo {
            Topology::Mesh { level, .. } => Some(*level),
            Topology::Circle { .. } => None,
        }
    }

    pub fn triangles(&self) -> Option<&[[usize; 3]]> {
        match &self.topo {
            Topology::Mesh { triangles, .. } => Some(triangles),
            Topology::Circle { .. } => None,
        }
    }

    /// Quadrature of nodal values against the node weights.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Interpolation stencil for an arbitrary (not necessarily unit) direction.
    pub fn locate(&self, dir: &Spatial) -> Stencil {
        match &self.topo {
            Topology::Circle { angles, uniform } => locate_circle(angles, *uniform, dir),
            Topology::Mesh { triangles, across, .. } => locate_mesh(&self.nodes, triangles, across, dir, 0).0,
        }
    }

    /// Locates a batch of directions, reusing the previous triangle as a
    /// starting point for the mesh walk.
    pub fn locate_all(&self, dirs: &[Spatial]) -> Vec<Stencil> {
        match &self.topo {
            Topology::Circle { angles, uniform } => dirs.iter().map(|d| locate_circle(angles, *uniform, d)).collect(),
            Topology::Mesh { triangles, across, .. } => {
                let mut hint = 0;
                dirs.iter()
                    .map(|d| {
                        let (s, t) = locate_mesh(&self.nodes, triangles, across, d, hint);
                        hint = t;
                        s
                    })
                    .collect()
            }
        }
    }

    pub fn interpolate(&self, values: &[f64], dir: &Spatial) -> f64 {
        self.locate(dir).apply(values)
    }

    pub fn nearest(&self, dir: &Spatial) -> usize {
        self.locate(dir).dominant()
    }

    /// Tangential gradient of nodal values at node `i`.
    pub fn tangent_gradient(&self, values: &[f64], i: usize) -> Spatial {
        match &self.topo {
            Topology::Circle { angles, uniform } => {
                let n = angles.len();
                let th = angles[i];
                let tangent = [-th.sin(), th.cos(), 0.0];
                let d = if *uniform && n >= 5 {
                    let h = TAU / n as f64;
                    let at = |k: isize| values[((i as isize + k).rem_euclid(n as isize)) as usize];
                    (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h)
                } else {
                    let ip = (i + 1) % n;
                    let im = (i + n - 1) % n;
                    let hp = (angles[ip] - th).rem_euclid(TAU);
                    let hm = (th - angles[im]).rem_euclid(TAU);
                    let fp = values[ip];
                    let fm = values[im];
                    let f0 = values[i];
                    (hm * hm * (fp - f0) + hp * hp * (f0 - fm)) / (hp * hm * (hp + hm))
                };
                scale(&tangent, d)
            }
            Topology::Mesh { .. } => {
                // Least-squares fit of an ambient linear function on the chords to
                // the neighbours; the normal component absorbs the curvature term.
                let p = self.nodes[i];
                let mut a = [[0.0; 3]; 3];
                let mut b = [0.0; 3];
                for &j in &self.neighbors[i] {
                    let c = sub(&self.nodes[j], &p);
                    let df = values[j] - values[i];
                    for r in 0..3 {
                        for s in 0..3 {
                            a[r][s] += c[r] * c[s];
                        }
                        b[r] += c[r] * df;
                    }
                }
                let g = solve3(&a, &b);
                sub(&g, &scale(&p, dot(&g, &p)))
            }
        }
    }
}

fn norm_diff(a: &Spatial, b: &Spatial) -> f64 {
    let d = sub(a, b);
    dot(&d, &d).sqrt()
}

fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Spatial {
    let det = det3(&a[0], &a[1], &a[2]);
    let col = |k: usize| -> f64 {
        let mut m = *a;
        for r in 0..3 {
            m[r][k] = b[r];
        }
        det3(&m[0], &m[1], &m[2])
    };
    [col(0) / det, col(1) / det, col(2) / det]
}

fn locate_circle(angles: &[f64], uniform: bool, dir: &Spatial) -> Stencil {
    let n = angles.len();
    let phi = dir[1].atan2(dir[0]).rem_euclid(TAU);
    let j = if uniform {
        ((phi / TAU * n as f64).floor() as usize).min(n - 1)
    } else {
        let k = angles.partition_point(|a| *a <= phi);
        if k == 0 {
            n - 1
        } else {
            k - 1
        }
    };
    let jn = (j + 1) % n;
    let start = angles[j];
    let span = (angles[jn] - start).rem_euclid(TAU);
    let span = if span == 0.0 { TAU } else { span };
    // Roundoff can put `phi` just below `start`; wrap to a signed offset.
    let mut off = (phi - start).rem_euclid(TAU);
    if off > 0.5 * (TAU + span) {
        off -= TAU;
    }
    let s = (off / span).clamp(0.0, 1.0);
    Stencil { idx: [j, jn, jn], w: [1.0 - s, s, 0.0] }
}

fn det3(a: &Spatial, b: &Spatial, c: &Spatial) -> f64 {
    dot(a, &cross(b, c))
}

fn barycentric(nodes: &[Spatial], tri: &[usize; 3], d: &Spatial) -> [f64; 3] {
    let (a, b, c) = (&nodes[tri[0]], &nodes[tri[1]], &nodes[tri[2]]);
    let full = det3(a, b, c);
    [det3(d, b, c) / full, det3(a, d, c) / full, det3(a, b, d) / full]
}

fn stencil_from(tri: &[usize; 3], bc: [f64; 3]) -> Stencil {
    let clamped = [bc[0].max(0.0), bc[1].max(0.0), bc[2].max(0.0)];
    let s = clamped[0] + clamped[1] + clamped[2];
    Stencil { idx: *tri, w: [clamped[0] / s, clamped[1] / s, clamped[2] / s] }
}

fn locate_mesh(
    nodes: &[Spatial],
    triangles: &[[usize; 3]],
    across: &[[usize; 3]],
    dir: &Spatial,
    start: usize,
) -> (Stencil, usize) {
    const EPS: f64 = -1e-12;
    let mut t = start;
    for _ in 0..triangles.len() {
        let bc = barycentric(nodes, &triangles[t], dir);
        let mut worst = 0;
        for k in 1..3 {
            if bc[k] < bc[worst] {
                worst = k;
            }
        }
        if bc[worst] >= EPS {
            return (stencil_from(&triangles[t], bc), t);
        }
        t = across[t][worst];
    }
    // The walk should always terminate on a convex mesh; fall back to a scan.
    let mut best = (f64::NEG_INFINITY, 0, [0.0; 3]);
    for (t, tri) in triangles.iter().enumerate() {
        let bc = barycentric(nodes, tri, dir);
        let m = bc[0].min(bc[1]).min(bc[2]);
        if m > best.0 {
            best = (m, t, bc);
        }
    }
    (stencil_from(&triangles[best.1], best.2), best.1)
}

fn build_icosphere(level: u32) -> (Vec<Spatial>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let mut nodes: Vec<Spatial> = raw.iter().map(normalize).collect();
    let mut tris: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, nodes: &mut Vec<Spatial>| -> usize {
            *cache.entry((a.min(b), a.max(b))).or_insert_with(|| {
                nodes.push(normalize(&add(&nodes[a], &nodes[b])));
                nodes.len() - 1
            })
        };
        let mut next = Vec::with_capacity(tris.len() * 4);
        for &[a, b, c] in &tris {
            let ab = mid(a, b, &mut nodes);
            let bc = mid(b, c, &mut nodes);
            let ca = mid(c, a, &mut nodes);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        tris = next;
    }
    (nodes, tris)
}

/// Solid angle of the spherical triangle with unit vertices a, b, c.
pub fn spherical_triangle_area(a: &Spatial, b: &Spatial, c: &Spatial) -> f64 {
    let num = det3(a, b, c).abs();
    let den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * num.atan2(den)
}

fn voronoi_weights(nodes: &[Spatial], tris: &[[usize; 3]]) -> Vec<f64> {
    let mut w = vec![0.0; nodes.len()];
    for tri in tris {
        let [a, b, c] = tri.map(|i| nodes[i]);
        let mut cc = normalize(&cross(&sub(&b, &a), &sub(&c, &a)));
        if dot(&cc, &add(&add(&a, &b), &c)) < 0.0 {
            cc = scale(&cc, -1.0);
        }
        for k in 0..3 {
            let p = nodes[tri[k]];
            let q = nodes[tri[(k + 1) % 3]];
            let r = nodes[tri[(k + 2) % 3]];
            let mpq = normalize(&add(&p, &q));
            let mpr = normalize(&add(&p, &r));
            w[tri[k]] += spherical_triangle_area(&p, &mpq, &cc) + spherical_triangle_area(&p, &cc, &mpr);
        }
    }
    w
}

/// Total solid angle, used as a consistency check: 2pi or 4pi.
pub fn full_measure(dim: Dim) -> f64 {
    match dim {
        Dim::Two => TAU,
        Dim::Three => 4.0 * PI,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_weights() {
        let g = sphere_grid(Dim::Two, 8).unwrap();
        assert!(g.weights().iter().all(|w| (w - PI / 4.0).abs() < 1e-15));
        assert!(sphere_grid(Dim::Two, 4).is_err());
    }

    #[test]
    fn icosphere_counts_and_weights() {
        for level in 0..5 {
            let g = SphereGrid::icosphere(level);
            assert_eq!(g.len(), icosphere_node_count(level));
            let total: f64 = g.weights().iter().sum();
            assert!((total - 4.0 * PI).abs() < 1e-9, "level {level}: {total}");
            assert!(g.weights().iter().all(|w| *w > 0.0));
        }
    }

    #[test]
    fn resolution_picks_level() {
        let g = sphere_grid(Dim::Three, 2562).unwrap();
        assert_eq!(g.icosphere_level(), Some(4));
        let g = sphere_grid(Dim::Three, 13).unwrap();
        assert_eq!(g.icosphere_level(), Some(1));
    }

    #[test]
    fn interpolation_reproduces_linear_functions_on_circle() {
        let g = SphereGrid::circle(64);
        let vals: Vec<f64> = (0..64).map(|i| i as f64).collect();
        let th = 2.5 * TAU / 64.0;
        let v = g.interpolate(&vals, &[th.cos(), th.sin(), 0.0]);
        assert!((v - 2.5).abs() < 1e-12);
    }

    #[test]
    fn mesh_interpolation_is_exact_at_nodes_and_bounded() {
        let g = SphereGrid::icosphere(3);
        let vals: Vec<f64> = g.nodes().iter().map(|p| p[0] + 2.0 * p[2]).collect();
        for i in (0..g.len()).step_by(37) {
            assert!((g.interpolate(&vals, g.node(i)) - vals[i]).abs() < 1e-9);
        }
        let d = normalize(&[0.3, -0.4, 0.8]);
        let v = g.interpolate(&vals, &d);
        assert!((v - (d[0] + 2.0 * d[2])).abs() < 2e-2);
    }

    #[test]
    fn nonuniform_circle() {
        let angles = vec![0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let g = SphereGrid::circle_from_angles(angles).unwrap();
        let total: f64 = g.weights().iter().sum();
        assert!((total - TAU).abs() < 1e-14);
        let vals = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        let v = g.interpolate(&vals, &[1.5f64.cos(), 1.5f64.sin(), 0.0]);
        assert!((v - 3.5).abs() < 1e-12);
        assert!(SphereGrid::circle_from_angles(vec![0.0, 0.2, 0.1, 1.0, 2.0, 3.0, 4.0, 5.0]).is_err());
    }

    #[test]
    fn tangent_gradient_of_linear_function() {
        let g = SphereGrid::icosphere(4);
        let vals: Vec<f64> = g.nodes().iter().map(|p| p[2]).collect();
        let i = 100;
        let p = g.node(i);
        let exact = sub(&[0.0, 0.0, 1.0], &scale(p, p[2]));
        let got = g.tangent_gradient(&vals, i);
        assert!(norm_diff(&exact, &got) < 1e-2, "{exact:?} {got:?}");
        let c = SphereGrid::circle(256);
        let vals: Vec<f64> = c.nodes().iter().map(|p| p[1]).collect();
        let got = c.tangent_gradient(&vals, 0);
        assert!((got[1] - 1.0).abs() < 1e-7);
    }
}
