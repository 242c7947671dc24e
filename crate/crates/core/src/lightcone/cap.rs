use std::sync::Arc;

use super::arrival::ArrivalField;
use super::profile::{perimeter, ConeProfile};
use crate::error::{Error, Result};
use crate::geometry::vector::{dot, scale};
use crate::geometry::{Dim, SpacetimeVector, SphereGrid};

/// Profile of the cap cut from the null cone by the spacelike hyperplane
/// `eta(x, v/|v|) = -l`.
pub fn cap_profile(v: &SpacetimeVector, l: f64, grid: Arc<SphereGrid>) -> Result<ConeProfile> {
    v.check_finite()?;
    if v.square() >= 0.0 || v.t <= 0.0 {
        return Err(Error::NotFutureTimelike);
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidProfile(format!("cap height {l} must be positive")));
    }
    let len = (-v.square()).sqrt();
    ConeProfile::from_fn(grid, |d| l * len / (v.t - dot(&v.x, d)))
}

/// `|D(C_l)| = 2 omega_n l^{n+1} / (n + 1)`.
pub fn cap_volume_oracle(dim: Dim, l: f64) -> f64 {
    let n = dim.n() as f64;
    2.0 * dim.omega() * l.powf(n + 1.0) / (n + 1.0)
}

/// Cap height with the same perimeter as `p`.
pub fn matched_cap_height(p: &ConeProfile) -> f64 {
    let dim = p.dim();
    let e = dim.n() as f64 - 1.0;
    (perimeter(p) / dim.sphere_area()).powf(1.0 / e)
}

/// Radial section of `D(C_f)` at time depth `delta` below its future boundary:
/// for each node direction, the radius `rho` with `delta + rho = u(rho theta)`.
pub fn future_section(p: &ConeProfile, delta: f64) -> Result<ConeProfile> {
    let limit = p.min_value();
    if !(delta > 0.0 && delta < limit) {
        return Err(Error::DeltaOutOfRange { delta, limit });
    }
    let field = ArrivalField::new(p);
    let values = p
        .grid()
        .nodes()
        .iter()
        .zip(p.values())
        .map(|(dir, f)| {
            let mut lo = 0.0;
            let mut hi = *f;
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if field.eval(&scale(dir, mid)) - mid - delta > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-14 * f {
                    break;
                }
            }
            lo
        })
        .collect();
    p.with_values(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn oracle_values() {
        assert!((cap_volume_oracle(Dim::Two, 1.0) - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((cap_volume_oracle(Dim::Two, 2.0) - 16.0 * PI / 3.0).abs() < 1e-12);
        assert!((cap_volume_oracle(Dim::Three, 1.0) - 2.0 * PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn cap_of_rest_frame_is_constant() {
        let g = Arc::new(SphereGrid::circle(32));
        let p = cap_profile(&SpacetimeVector::time_unit(), 1.5, g).unwrap();
        assert!(p.values().iter().all(|v| (v - 1.5).abs() < 1e-15));
        assert!((matched_cap_height(&p) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn section_of_unit_cone() {
        let g = Arc::new(SphereGrid::circle(64));
        let p = ConeProfile::constant(g, 1.0).unwrap();
        let s = future_section(&p, 0.2).unwrap();
        assert!(s.values().iter().all(|v| (v - 0.9).abs() < 1e-12));
        assert!(future_section(&p, 1.0).is_err());
    }
}
