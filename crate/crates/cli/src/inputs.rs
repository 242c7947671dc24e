//! Building profiles, mirrors and sets from the settings.

use std::sync::Arc;

use anyhow::{bail, Context, Result};
use lightcone_core::geometry::{
    sphere_grid, Dim, ReflectionPlane, SpacetimeVector, Spatial, SphereGrid, TimelikeHyperplane,
};
use lightcone_core::hyperboloid::{read_hyperbolic_set, HypDodResolution, HyperbolicSet};
use lightcone_core::lightcone::io::read_profile;
use lightcone_core::lightcone::{cap_profile, dod_volume, ConeProfile};
use lightcone_core::random::{random_profile, seeded};

use crate::settings::{Settings, Shape};

pub fn dim(s: &Settings) -> Result<Dim> {
    Ok(Dim::from_n(s.n.unwrap_or(2))?)
}

pub fn directions(s: &Settings, default: usize) -> Result<Arc<SphereGrid>> {
    Ok(Arc::new(sphere_grid(dim(s)?, s.grid.unwrap_or(default))?))
}

pub fn direction(s: &Settings) -> Spatial {
    let a = s.angle.unwrap_or(0.0);
    [a.cos(), a.sin(), 0.0]
}

/// Profile from `--profile`, else the built-in `--shape`.
pub struct ProfileInput {
    pub profile: ConeProfile,
    /// Closed-form volume and perimeter when the profile is a cap.
    pub cap_height: Option<f64>,
}

pub fn profile(s: &Settings, default_shape: Shape, default_grid: usize) -> Result<ProfileInput> {
    if let Some(path) = &s.profile {
        let profile = read_profile(path).with_context(|| format!("reading profile {}", path.display()))?;
        let (lo, hi) = (profile.min_value(), profile.max_value());
        let cap_height = (lo == hi).then_some(lo);
        return Ok(ProfileInput { profile, cap_height });
    }
    let grid = directions(s, default_grid)?;
    let level = s.level.unwrap_or(1.0);
    let amplitude = s.amplitude.unwrap_or(0.3);
    let input = match s.shape.unwrap_or(default_shape) {
        Shape::Const => ProfileInput { profile: ConeProfile::constant(grid, level)?, cap_height: Some(level) },
        Shape::Cos2 => {
            let profile = ConeProfile::from_fn(grid, |d| level * (1.0 + amplitude * (2.0 * d[1].atan2(d[0])).cos()))?;
            ProfileInput { profile, cap_height: None }
        }
        Shape::Cap => {
            let v = SpacetimeVector::boosted_time(s.alpha.unwrap_or(0.5), direction(s));
            ProfileInput { profile: cap_profile(&v, level, grid)?, cap_height: Some(level) }
        }
        Shape::Random => {
            let mut rng = seeded(s.seed_for("the random shape")?);
            let p = random_profile(grid, &mut rng, s.modes.unwrap_or(5), amplitude)?;
            ProfileInput { profile: p.with_values(p.values().iter().map(|v| level * v).collect())?, cap_height: None }
        }
    };
    Ok(input)
}

/// Timelike hyperplane with normal `(sinh alpha, cosh alpha * dir)`.
pub fn hyperplane(s: &Settings) -> Result<TimelikeHyperplane> {
    Ok(TimelikeHyperplane::from_rapidity(s.alpha.unwrap_or(0.5), direction(s))?)
}

/// The mirror of `hyperplane` with e0 as polariser.
pub fn reflection_plane(s: &Settings) -> Result<ReflectionPlane> {
    ReflectionPlane::new(hyperplane(s)?, SpacetimeVector::time_unit())
        .context("e0 lies in the mirror; use a nonzero --alpha")
}

/// `|dod_volume(f = 1) - |D(C_1)||` on the grid of `p`: the quadrature noise
/// allowed in volume comparisons.
pub fn eps_grid(p: &ConeProfile, radial: usize) -> Result<f64> {
    let one = ConeProfile::constant(p.grid().clone(), 1.0)?;
    Ok((dod_volume(&one, radial)? - lightcone_core::lightcone::cap_volume_oracle(p.dim(), 1.0)).abs())
}

/// Set from `--set`, else the ball of radius `--delta` about e0 (returned
/// with its radius).
pub fn hyperbolic_set(s: &Settings) -> Result<(HyperbolicSet, Option<f64>)> {
    if let Some(path) = &s.set {
        let e = read_hyperbolic_set(path).with_context(|| format!("reading set {}", path.display()))?;
        if e.dim() != dim(s)? && s.n.is_some() {
            bail!("{} holds an n = {} set but --n is {}", path.display(), e.dim().n(), dim(s)?.n());
        }
        return Ok((e, None));
    }
    let delta = s.delta.unwrap_or(0.7);
    Ok((HyperbolicSet::ball(dim(s)?, SpacetimeVector::time_unit(), delta)?, Some(delta)))
}

pub fn hyp_resolution(s: &Settings, dim: Dim) -> Result<HypDodResolution> {
    let default = if dim == Dim::Two { 256 } else { 642 };
    let grid = sphere_grid(dim, s.grid.unwrap_or(default))?;
    Ok(HypDodResolution::new(Arc::new(grid), s.radial.unwrap_or(128)))
}
