//! The future boundary of the domain of dependence of a finite lightcone.
//!
//! A point `(t, x)` inside the null cone lies in `D(C_f)` iff its past null
//! cone leaves through the lateral boundary of `C_f`, which works out to
//! `t < u(x)` with `u(x) = inf_theta [ f(theta) + |x - f(theta) theta| ]`.

use std::cmp::Ordering;

use super::profile::ConeProfile;
use crate::error::{Error, Result};
use crate::geometry::vector::{dot, norm, scale, sub};
use crate::geometry::{Dim, Spatial, SphereGrid};

pub fn default_radial_nodes(dim: Dim) -> usize {
    match dim {
        Dim::Two => 1024,
        Dim::Three => 256,
    }
}

/// `f + |rho e - f d|` written with `s = |e - d|^2 / 2 = 1 - cos(angle)`,
/// which stays accurate when the two points nearly coincide.
#[inline]
fn term(rho: f64, f: f64, s: f64) -> f64 {
    let dr = rho - f;
    f + (dr * dr + 2.0 * rho * f * s).sqrt()
}

/// Candidate points `f_j theta_j` of the lateral boundary.
#[derive(Clone, Debug)]
pub struct ArrivalField {
    dim: Dim,
    radii: Vec<f64>,
    dirs: Vec<Spatial>,
    max_radius: f64,
}

impl ArrivalField {
    pub fn new(p: &ConeProfile) -> Self {
        let mut radii = p.values().to_vec();
        let mut dirs = p.grid().nodes().to_vec();
        if let Some(s) = p.sector_data() {
            for (b, v) in s.boundary_values() {
                radii.push(v);
                dirs.push([b.cos(), b.sin(), 0.0]);
            }
        }
        let max_radius = radii.iter().cloned().fold(0.0, f64::max);
        ArrivalField { dim: p.dim(), radii, dirs, max_radius }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Beyond this radius `u(x) = |x|`.
    pub fn max_radius(&self) -> f64 {
        self.max_radius
    }

    pub fn eval(&self, x: &Spatial) -> f64 {
        let mut u = f64::INFINITY;
        for (f, d) in self.radii.iter().zip(&self.dirs) {
            let v = f + norm(&sub(x, &scale(d, *f)));
            if v < u {
                u = v;
            }
        }
        u
    }

    /// Prepares fast evaluation along the ray spanned by the unit vector `dir`.
    pub fn along(&self, dir: &Spatial) -> Ray {
        let mut order: Vec<(f64, f64)> = self
            .radii
            .iter()
            .zip(&self.dirs)
            .map(|(f, d)| {
                let e = sub(d, dir);
                (0.5 * dot(&e, &e), *f)
            })
            .collect();
        order.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        let mut suffix_min = vec![0.0; order.len()];
        let mut m = f64::INFINITY;
        for k in (0..order.len()).rev() {
            m = m.min(order[k].1);
            suffix_min[k] = m;
        }
        Ray { order, suffix_min }
    }
}

/// Candidates sorted by angular distance to a fixed direction. Each candidate
/// contributes `f + |rho e - f d|`, which grows with both `f` and the angle,
/// so the scan can stop as soon as the smallest remaining radius at the
/// current angle cannot beat the running minimum.
#[derive(Clone, Debug)]
pub struct Ray {
    order: Vec<(f64, f64)>,
    suffix_min: Vec<f64>,
}

impl Ray {
    pub fn eval(&self, rho: f64) -> f64 {
        let mut u = f64::INFINITY;
        for (k, &(s, f)) in self.order.iter().enumerate() {
            if term(rho, self.suffix_min[k], s) >= u {
                break;
            }
            let v = term(rho, f, s);
            if v < u {
                u = v;
            }
        }
        u
    }
}

/// `u(x)` for a single point. Build an [`ArrivalField`] for repeated use.
pub fn arrival(p: &ConeProfile, x: &Spatial) -> f64 {
    ArrivalField::new(p).eval(x)
}

fn trapezoid_weight(m: usize, count: usize) -> f64 {
    if m == 0 || m + 1 == count {
        0.5
    } else {
        1.0
    }
}

fn check_radial(radial_nodes: usize) -> Result<()> {
    if radial_nodes < 8 {
        return Err(Error::ResolutionTooLow { got: radial_nodes, min: 8 });
    }
    Ok(())
}

/// Volume of `D(C_f)` with the profile grid as direction grid.
pub fn dod_volume(p: &ConeProfile, radial_nodes: usize) -> Result<f64> {
    dod_volume_on(p, p.grid(), radial_nodes)
}

/// Volume of `D(C_f)`: integral over directions and radii of
/// `(u(rho theta) - rho)_+ rho^{n-1}`, composite trapezoid in `rho`.
pub fn dod_volume_on(p: &ConeProfile, dirs: &SphereGrid, radial_nodes: usize) -> Result<f64> {
    check_radial(radial_nodes)?;
    if dirs.dim() != p.dim() {
        return Err(Error::GridMismatch);
    }
    let field = ArrivalField::new(p);
    Ok(radial_integral(dirs, field.max_radius(), radial_nodes, |dir| {
        let ray = field.along(dir);
        move |rho| (ray.eval(rho) - rho).max(0.0)
    }))
}

/// Volume of the symmetric difference of the two domains of dependence.
pub fn dod_symdiff(p1: &ConeProfile, p2: &ConeProfile, radial_nodes: usize) -> Result<f64> {
    check_radial(radial_nodes)?;
    if !p1.same_grid(p2) {
        return Err(Error::GridMismatch);
    }
    let a = ArrivalField::new(p1);
    let b = ArrivalField::new(p2);
    let r = a.max_radius().max(b.max_radius());
    Ok(radial_integral(p1.grid(), r, radial_nodes, |dir| {
        let ra = a.along(dir);
        let rb = b.along(dir);
        move |rho| (ra.eval(rho) - rb.eval(rho)).abs()
    }))
}

fn radial_integral<F, G>(dirs: &SphereGrid, r_max: f64, count: usize, mut per_dir: F) -> f64
where
    F: FnMut(&Spatial) -> G,
    G: Fn(f64) -> f64,
{
    let e = dirs.dim().n() as i32 - 1;
    let h = r_max / (count - 1) as f64;
    let mut total = 0.0;
    for (dir, mu) in dirs.nodes().iter().zip(dirs.weights()) {
        let g = per_dir(dir);
        let mut s = 0.0;
        for m in 0..count {
            let rho = m as f64 * h;
            let v = g(rho);
            if v > 0.0 {
                s += trapezoid_weight(m, count) * v * rho.powi(e);
            }
        }
        total += mu * s * h;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lightcone::profile::SectorData;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn constant(n: usize, c: f64) -> ConeProfile {
        ConeProfile::constant(Arc::new(SphereGrid::circle(n)), c).unwrap()
    }

    #[test]
    fn arrival_examples() {
        let p = constant(256, 1.0);
        assert!((arrival(&p, &[0.0; 3]) - 2.0).abs() < 1e-12);
        assert!((arrival(&p, &[0.5, 0.0, 0.0]) - 1.5).abs() < 1e-12);
        assert!((arrival(&p, &[2.0, 0.0, 0.0]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ray_scan_matches_brute_force() {
        let g = Arc::new(SphereGrid::circle(97));
        let p = ConeProfile::from_fn(g, |d| 1.0 + 0.4 * (3.0 * d[1].atan2(d[0])).cos() + 0.2 * d[0]).unwrap();
        let field = ArrivalField::new(&p);
        for k in 0..13 {
            let a = 0.37 * k as f64;
            let dir = [a.cos(), a.sin(), 0.0];
            let ray = field.along(&dir);
            for m in 0..30 {
                let rho = 0.06 * m as f64;
                let brute = field.eval(&scale(&dir, rho));
                assert!((ray.eval(rho) - brute).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn unit_cone_volume() {
        let p = constant(64, 1.0);
        let v = dod_volume(&p, 1024).unwrap();
        assert!((v - 2.0 * PI / 3.0).abs() < 1e-5);
    }

    #[test]
    fn nested_symdiff() {
        let g = Arc::new(SphereGrid::circle(64));
        let a = ConeProfile::constant(g.clone(), 1.0).unwrap();
        let b = ConeProfile::constant(g, 1.1).unwrap();
        let d = dod_symdiff(&a, &b, 2048).unwrap();
        let exact = (1.1f64.powi(3) - 1.0) * 2.0 * PI / 3.0;
        assert!((d - exact).abs() / exact < 1e-4);
        assert!(dod_symdiff(&a, &a, 64).unwrap() == 0.0);
    }

    #[test]
    fn sector_volume_ignores_point_values() {
        let g = Arc::new(SphereGrid::circle(64));
        let p = ConeProfile::sectors(g, SectorData::steps(vec![0.0, PI], vec![2.0, 1.0]).unwrap()).unwrap();
        let up = crate::lightcone::upper_envelope(&p);
        assert_eq!(dod_volume(&p, 256).unwrap(), dod_volume(&up, 256).unwrap());
    }

    #[test]
    fn rejects_mismatched_grids() {
        let a = constant(64, 1.0);
        let b = constant(32, 1.0);
        assert!(matches!(dod_symdiff(&a, &b, 64), Err(Error::GridMismatch)));
    }
}
