use serde::{Deserialize, Serialize};

use super::vector::{eta, SpacetimeVector};
use crate::error::{Error, Result};

/// Default half-width of the mirror band used by [`ReflectionPlane::side_of`].
pub const EPS_ON: f64 = 1e-12;
/// Smallest admissible `|eta(v, w)|` for a polariser.
pub const EPS_POLARISER: f64 = 1e-9;

/// Timelike hyperplane through the origin, stored as its unit spacelike normal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimelikeHyperplane {
    w: SpacetimeVector,
}

impl TimelikeHyperplane {
    pub fn from_normal(w: SpacetimeVector) -> Result<Self> {
        w.check_finite()?;
        let q = w.square();
        if q <= 1e-12 * w.euclid_norm_sq() {
            return Err(Error::NotSpacelike(q));
        }
        Ok(TimelikeHyperplane { w: w * (1.0 / q.sqrt()) })
    }

    /// Mirror with normal `(sinh a, cosh a * dir)` for a spatial unit `dir`.
    pub fn from_rapidity(alpha: f64, dir: [f64; 3]) -> Result<Self> {
        Self::from_normal(SpacetimeVector::new(alpha.sinh(), super::vector::scale(&dir, alpha.cosh())))
    }

    pub fn normal(&self) -> &SpacetimeVector {
        &self.w
    }

    pub fn reflect(&self, p: &SpacetimeVector) -> SpacetimeVector {
        *p - self.w * (2.0 * eta(p, &self.w))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
    On,
}

/// A mirror together with a future timelike polariser `v` off the mirror.
/// The plus side is the open half-space containing `v`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReflectionPlane {
    hyperplane: TimelikeHyperplane,
    v: SpacetimeVector,
}

impl ReflectionPlane {
    pub fn new(hyperplane: TimelikeHyperplane, v: SpacetimeVector) -> Result<Self> {
        v.check_finite()?;
        if v.square() >= 0.0 || v.t <= 0.0 {
            return Err(Error::NotFutureTimelike);
        }
        let v = v.normalized();
        let c = eta(&v, hyperplane.normal());
        if c.abs() < EPS_POLARISER {
            return Err(Error::PolariserInMirror(c.abs()));
        }
        Ok(ReflectionPlane { hyperplane, v })
    }

    pub fn from_normal(w: SpacetimeVector, v: SpacetimeVector) -> Result<Self> {
        Self::new(TimelikeHyperplane::from_normal(w)?, v)
    }

    pub fn hyperplane(&self) -> &TimelikeHyperplane {
        &self.hyperplane
    }

    pub fn normal(&self) -> &SpacetimeVector {
        self.hyperplane.normal()
    }

    pub fn polariser(&self) -> &SpacetimeVector {
        &self.v
    }

    /// `+1` when the normal points into the plus side, `-1` otherwise.
    pub fn orientation(&self) -> f64 {
        eta(&self.v, self.normal()).signum()
    }

    pub fn reflect(&self, p: &SpacetimeVector) -> SpacetimeVector {
        self.hyperplane.reflect(p)
    }

    pub fn side_of(&self, p: &SpacetimeVector) -> Side {
        self.side_of_eps(p, EPS_ON)
    }

    pub fn side_of_eps(&self, p: &SpacetimeVector, eps_on: f64) -> Side {
        let s = eta(p, self.normal());
        if s.abs() <= eps_on * p.euclid_norm() {
            Side::On
        } else if s * self.orientation() > 0.0 {
            Side::Plus
        } else {
            Side::Minus
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(w: SpacetimeVector) -> ReflectionPlane {
        ReflectionPlane::from_normal(w, SpacetimeVector::time_unit() + SpacetimeVector::new(0.0, [0.3, 0.0, 0.0]))
            .unwrap()
    }

    #[test]
    fn spatial_mirror_flips_x1() {
        let p = plane(SpacetimeVector::spatial_unit(1));
        let r = p.reflect(&SpacetimeVector::new(1.0, [0.5, 0.0, 0.0]));
        assert_eq!(r, SpacetimeVector::new(1.0, [-0.5, 0.0, 0.0]));
    }

    #[test]
    fn reflection_is_involutive_isometry() {
        let p = plane(SpacetimeVector::new(0.4, [1.0, 0.2, 0.0]));
        let a = SpacetimeVector::new(1.3, [0.1, -0.7, 0.0]);
        let b = SpacetimeVector::new(-0.2, [0.8, 0.4, 0.0]);
        let ra = p.reflect(&a);
        assert!((eta(&ra, &p.reflect(&b)) - eta(&a, &b)).abs() < 1e-12);
        let back = p.reflect(&ra);
        assert!((back - a).euclid_norm() < 1e-12);
    }

    #[test]
    fn sides() {
        let p = plane(SpacetimeVector::spatial_unit(1));
        assert_eq!(p.side_of(p.polariser()), Side::Plus);
        assert_eq!(p.side_of(&SpacetimeVector::new(1.0, [-0.5, 0.0, 0.0])), Side::Minus);
        assert_eq!(p.side_of(&SpacetimeVector::new(1.0, [0.0, 0.5, 0.0])), Side::On);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(TimelikeHyperplane::from_normal(SpacetimeVector::time_unit()).is_err());
        let h = TimelikeHyperplane::from_normal(SpacetimeVector::spatial_unit(1)).unwrap();
        assert!(matches!(ReflectionPlane::new(h, SpacetimeVector::time_unit()), Err(Error::PolariserInMirror(_))));
        assert!(ReflectionPlane::new(h, SpacetimeVector::new(-1.0, [0.2, 0.0, 0.0])).is_err());
    }
}
