use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spatial dimension of the spacetime `R^{1,n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn from_n(n: usize) -> Result<Dim> {
        match n {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }

    pub fn n(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    /// Volume of the Euclidean unit ball.
    pub fn omega(self) -> f64 {
        match self {
            Dim::Two => PI,
            Dim::Three => 4.0 * PI / 3.0,
        }
    }

    /// Area of the unit sphere, `n * omega`.
    pub fn sphere_area(self) -> f64 {
        self.n() as f64 * self.omega()
    }
}

/// A vector in Minkowski space. The spatial part is padded with zeros when n = 2.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct SpacetimeVector {
    pub t: f64,
    pub x: [f64; 3],
}

pub type Spatial = [f64; 3];

impl SpacetimeVector {
    pub const ORIGIN: SpacetimeVector = SpacetimeVector { t: 0.0, x: [0.0; 3] };

    pub fn new(t: f64, x: Spatial) -> Self {
        SpacetimeVector { t, x }
    }

    /// Builds a vector from `t` and 2 or 3 spatial components.
    pub fn from_slice(t: f64, xs: &[f64]) -> Result<Self> {
        if xs.len() < 2 || xs.len() > 3 {
            return Err(Error::UnsupportedDimension(xs.len()));
        }
        let mut x = [0.0; 3];
        x[..xs.len()].copy_from_slice(xs);
        let v = SpacetimeVector { t, x };
        v.check_finite()?;
        Ok(v)
    }

    pub fn time_unit() -> Self {
        SpacetimeVector { t: 1.0, x: [0.0; 3] }
    }

    /// Unit spatial vector `e_i`, i in 1..=3.
    pub fn spatial_unit(i: usize) -> Self {
        let mut x = [0.0; 3];
        x[i - 1] = 1.0;
        SpacetimeVector { t: 0.0, x }
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.t.is_finite() && self.x.iter().all(|c| c.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("spacetime vector"))
        }
    }

    pub fn euclid_norm_sq(&self) -> f64 {
        self.t * self.t + dot(&self.x, &self.x)
    }

    pub fn euclid_norm(&self) -> f64 {
        self.euclid_norm_sq().sqrt()
    }

    /// Minkowski square `eta(a, a)`.
    pub fn square(&self) -> f64 {
        eta(self, self)
    }

    /// Rescales a timelike or spacelike vector to unit Minkowski length.
    pub fn normalized(&self) -> Self {
        *self * (1.0 / self.square().abs().sqrt())
    }

    /// Boost of rapidity `alpha` applied to `e0` along the spatial unit `dir`.
    pub fn boosted_time(alpha: f64, dir: Spatial) -> Self {
        SpacetimeVector { t: alpha.cosh(), x: scale(&dir, alpha.sinh()) }
    }
}

impl Add for SpacetimeVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        SpacetimeVector { t: self.t + o.t, x: [self.x[0] + o.x[0], self.x[1] + o.x[1], self.x[2] + o.x[2]] }
    }
}

impl Sub for SpacetimeVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for SpacetimeVector {
    type Output = Self;
    fn neg(self) -> Self {
        SpacetimeVector { t: -self.t, x: [-self.x[0], -self.x[1], -self.x[2]] }
    }
}

impl Mul<f64> for SpacetimeVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        SpacetimeVector { t: self.t * s, x: scale(&self.x, s) }
    }
}

/// Minkowski inner product with signature (-, +, ..., +).
pub fn eta(a: &SpacetimeVector, b: &SpacetimeVector) -> f64 {
    -a.t * b.t + dot(&a.x, &b.x)
}

pub fn dot(a: &Spatial, b: &Spatial) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: &Spatial) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: &Spatial, s: f64) -> Spatial {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn sub(a: &Spatial, b: &Spatial) -> Spatial {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add(a: &Spatial, b: &Spatial) -> Spatial {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn cross(a: &Spatial, b: &Spatial) -> Spatial {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn normalize(a: &Spatial) -> Spatial {
    let n = norm(a);
    scale(a, 1.0 / n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalKind {
    Timelike,
    Null,
    Spacelike,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimeOrientation {
    Future,
    Past,
    Unoriented,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalClass {
    pub kind: CausalKind,
    pub orientation: TimeOrientation,
}

/// Classifies `a` with a null band of half-width `eps_null * |a|_E^2`.
pub fn causal_class(a: &SpacetimeVector, eps_null: f64) -> Result<CausalClass> {
    a.check_finite()?;
    let q = a.square();
    let band = eps_null * a.euclid_norm_sq();
    let kind = if q < -band {
        CausalKind::Timelike
    } else if q > band {
        CausalKind::Spacelike
    } else {
        CausalKind::Null
    };
    let orientation = match kind {
        CausalKind::Spacelike => TimeOrientation::Unoriented,
        _ if a.t > 0.0 => TimeOrientation::Future,
        _ if a.t < 0.0 => TimeOrientation::Past,
        _ => TimeOrientation::Unoriented,
    };
    Ok(CausalClass { kind, orientation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_product_examples() {
        let a = SpacetimeVector::new(1.0, [1.0, 0.0, 0.0]);
        assert_eq!(eta(&a, &a), 0.0);
        let e0 = SpacetimeVector::time_unit();
        assert_eq!(eta(&e0, &e0), -1.0);
    }

    #[test]
    fn classification() {
        let c = causal_class(&SpacetimeVector::new(0.0, [0.0, 1.0, 0.0]), 1e-10).unwrap();
        assert_eq!(c.kind, CausalKind::Spacelike);
        assert_eq!(c.orientation, TimeOrientation::Unoriented);
        let c = causal_class(&SpacetimeVector::new(-1.0, [1.0, 0.0, 0.0]), 1e-10).unwrap();
        assert_eq!(c, CausalClass { kind: CausalKind::Null, orientation: TimeOrientation::Past });
        let c = causal_class(&SpacetimeVector::new(2.0, [1.0, 0.0, 0.0]), 1e-10).unwrap();
        assert_eq!(c, CausalClass { kind: CausalKind::Timelike, orientation: TimeOrientation::Future });
    }

    #[test]
    fn rejects_nan() {
        assert!(causal_class(&SpacetimeVector::new(f64::NAN, [0.0; 3]), 1e-10).is_err());
        assert!(SpacetimeVector::from_slice(1.0, &[f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn boosted_time_is_unit() {
        let v = SpacetimeVector::boosted_time(0.7, [0.0, 1.0, 0.0]);
        assert!((v.square() + 1.0).abs() < 1e-14);
    }
}
