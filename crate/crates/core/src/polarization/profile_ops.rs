use serde::{Deserialize, Serialize};

use super::conformal::ConformalReflection;
use crate::error::{Error, Result};
use crate::geometry::{Side, TimelikeHyperplane};
use crate::lightcone::ConeProfile;

fn check(p: &ConeProfile, cr: &ConformalReflection) -> Result<()> {
    if p.sector_data().is_some() {
        return Err(Error::RequiresSmooth);
    }
    if !(std::sync::Arc::ptr_eq(p.grid(), cr.grid()) || **p.grid() == **cr.grid()) {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

fn reflected_values(p: &ConeProfile, cr: &ConformalReflection) -> Vec<f64> {
    cr.stencils().iter().zip(cr.image_factors()).map(|(s, lam)| lam * s.apply(p.values())).collect()
}

/// Profile of the reflected cone: `g(theta) = lambda(Gamma theta) f(Gamma theta)`,
/// with `f` interpolated at the image directions.
pub fn reflect_profile(p: &ConeProfile, cr: &ConformalReflection) -> Result<ConeProfile> {
    check(p, cr)?;
    p.with_values(reflected_values(p, cr))
}

/// Polarised profile: larger of `f` and its reflection on the polariser's
/// side, smaller on the other side, unchanged on the mirror.
pub fn polarize_profile(p: &ConeProfile, cr: &ConformalReflection) -> Result<ConeProfile> {
    check(p, cr)?;
    let sides = cr.polariser_sides()?;
    let g = reflected_values(p, cr);
    p.with_values(combine(p.values(), &g, &sides, Side::Plus))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetrizeSign {
    /// Keep the half containing the normal, mirror it onto the other half.
    Plus,
    Minus,
}

/// Symmetrised profile: keeps `f` on one side of the mirror and replaces it
/// by the reflected profile on the other.
pub fn symmetrize_profile(p: &ConeProfile, h: &TimelikeHyperplane, sign: SymmetrizeSign) -> Result<ConeProfile> {
    let cr = ConformalReflection::from_hyperplane(h, p.grid().clone());
    symmetrize_with(p, &cr, sign)
}

pub fn symmetrize_with(p: &ConeProfile, cr: &ConformalReflection, sign: SymmetrizeSign) -> Result<ConeProfile> {
    check(p, cr)?;
    let g = reflected_values(p, cr);
    let keep = match sign {
        SymmetrizeSign::Plus => Side::Plus,
        SymmetrizeSign::Minus => Side::Minus,
    };
    let values = p
        .values()
        .iter()
        .zip(&g)
        .zip(cr.normal_sides())
        .map(|((f, g), s)| if *s == keep || *s == Side::On { *f } else { *g })
        .collect();
    p.with_values(values)
}

fn combine(f: &[f64], g: &[f64], sides: &[Side], up: Side) -> Vec<f64> {
    f.iter()
        .zip(g)
        .zip(sides)
        .map(|((f, g), s)| match s {
            Side::On => *f,
            s if *s == up => f.max(*g),
            _ => f.min(*g),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ReflectionPlane, SpacetimeVector, SphereGrid};
    use crate::lightcone::{cap_profile, perimeter};
    use std::sync::Arc;

    fn plane() -> ReflectionPlane {
        let h = TimelikeHyperplane::from_rapidity(0.4, [0.8, 0.6, 0.0]).unwrap();
        ReflectionPlane::new(h, SpacetimeVector::time_unit()).unwrap()
    }

    #[test]
    fn reflecting_a_cap_gives_the_reflected_cap() {
        let g = Arc::new(SphereGrid::circle(2048));
        let v = SpacetimeVector::boosted_time(0.3, [1.0, 0.0, 0.0]);
        let p = cap_profile(&v, 1.0, g.clone()).unwrap();
        let pl = plane();
        let cr = ConformalReflection::new(&pl, g.clone());
        let r = reflect_profile(&p, &cr).unwrap();
        let expected = cap_profile(&pl.reflect(&v), 1.0, g).unwrap();
        for (a, b) in r.values().iter().zip(expected.values()) {
            assert!((a - b).abs() / b < 1e-5, "{a} {b}");
        }
    }

    #[test]
    fn rest_frame_cap_is_fixed_by_polarisation() {
        let g = Arc::new(SphereGrid::circle(512));
        let p = ConeProfile::constant(g.clone(), 1.0).unwrap();
        let cr = ConformalReflection::new(&plane(), g);
        let q = polarize_profile(&p, &cr).unwrap();
        for v in q.values() {
            assert!((v - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn spatial_mirror_polarisation() {
        let g = Arc::new(SphereGrid::circle(64));
        let p = ConeProfile::from_fn(g.clone(), |d| 1.0 - 0.3 * d[0]).unwrap();
        let h = TimelikeHyperplane::from_normal(SpacetimeVector::spatial_unit(1)).unwrap();
        let v = SpacetimeVector::new(1.0, [0.2, 0.0, 0.0]);
        let cr = ConformalReflection::new(&ReflectionPlane::new(h, v).unwrap(), g);
        let q = polarize_profile(&p, &cr).unwrap();
        for (d, val) in q.grid().nodes().iter().zip(q.values()) {
            let expected = 1.0 + 0.3 * d[0];
            assert!((val - expected).abs() < 1e-12, "{d:?} {val} {expected}");
        }
        assert!((perimeter(&q) - perimeter(&p)).abs() < 1e-12);
    }

    #[test]
    fn missing_polariser() {
        let g = Arc::new(SphereGrid::circle(16));
        let p = ConeProfile::constant(g.clone(), 1.0).unwrap();
        let cr = ConformalReflection::from_hyperplane(plane().hyperplane(), g);
        assert!(matches!(polarize_profile(&p, &cr), Err(Error::MissingPolariser)));
    }
}
