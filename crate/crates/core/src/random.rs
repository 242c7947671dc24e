//! Seeded generators for test and experiment inputs.
//!
//! All randomness goes through `ChaCha8Rng` so that a seed reproduces the
//! same inputs on every platform.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::achronal::FlatGraph;
use crate::error::Result;
use crate::geometry::vector::{dot, normalize};
use crate::geometry::{Dim, ReflectionPlane, SpacetimeVector, Spatial, SphereGrid, TimelikeHyperplane};
use crate::lightcone::ConeProfile;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction on the unit sphere of dimension n - 1.
pub fn random_direction(dim: Dim, rng: &mut impl Rng) -> Spatial {
    match dim {
        Dim::Two => {
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            [a.cos(), a.sin(), 0.0]
        }
        Dim::Three => loop {
            let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let r2 = dot(&p, &p);
            if r2 > 1e-6 && r2 <= 1.0 {
                break normalize(&p);
            }
        },
    }
}

/// Mirror with normal `(sinh a, cosh a * n)` for a uniform spatial direction
/// `n` and rapidity `a` uniform in `[-alpha_max, alpha_max]`, polarised by `e0`.
/// Rapidities with `|sinh a| < 1e-6` are redrawn.
pub fn random_reflection_plane(dim: Dim, rng: &mut impl Rng, alpha_max: f64) -> Result<ReflectionPlane> {
    loop {
        let dir = random_direction(dim, rng);
        let alpha: f64 = rng.gen_range(-alpha_max..=alpha_max);
        if alpha.sinh().abs() < 1e-6 {
            continue;
        }
        let h = TimelikeHyperplane::from_rapidity(alpha, dir)?;
        return ReflectionPlane::new(h, SpacetimeVector::time_unit());
    }
}

/// Chebyshev polynomial `T_k`, so that `T_k(cos t) = cos(k t)`.
fn chebyshev(k: usize, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if k == 0 {
        return a;
    }
    for _ in 1..k {
        let c = 2.0 * x * b - a;
        a = b;
        b = c;
    }
    b
}

/// Legendre polynomial `P_k`.
fn legendre(k: usize, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, x);
    if k == 0 {
        return a;
    }
    for j in 1..k {
        let j = j as f64;
        let c = ((2.0 * j + 1.0) * x * b - j * a) / (j + 1.0);
        a = b;
        b = c;
    }
    b
}

/// Smooth random profile `1 + sum_k c_k Z_k(<theta, a_k>)`, where `Z_k` is the
/// degree-k zonal harmonic (cos(k t) on the circle, Legendre on the sphere)
/// about a random axis `a_k`. The coefficients satisfy `sum |c_k| <= amplitude`,
/// so values stay within `[1 - amplitude, 1 + amplitude]`.
pub fn random_profile(grid: Arc<SphereGrid>, rng: &mut impl Rng, modes: usize, amplitude: f64) -> Result<ConeProfile> {
    let dim = grid.dim();
    let axes: Vec<Spatial> = (0..modes).map(|_| random_direction(dim, rng)).collect();
    let mut coeffs: Vec<f64> = (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let total: f64 = coeffs.iter().map(|c| c.abs()).sum();
    let target = amplitude * rng.gen_range(0.3..1.0);
    if total > 0.0 {
        coeffs.iter_mut().for_each(|c| *c *= target / total);
    }
    ConeProfile::from_fn(grid, |d| {
        1.0 + coeffs
            .iter()
            .zip(&axes)
            .enumerate()
            .map(|(k, (c, a))| {
                let x = dot(d, a).clamp(-1.0, 1.0);
                c * match dim {
                    Dim::Two => chebyshev(k + 1, x),
                    Dim::Three => legendre(k + 1, x),
                }
            })
            .sum::<f64>()
    })
}

/// Height function `base + sum_k a_k sin(<q_k, x> + phase_k)` on the lattice
/// `[-L, L]^2`, with `sum |a_k| |q_k|` drawn in `[0.3, 1] * slope`, which bounds
/// the Lipschitz constant by `slope`.
pub fn random_lipschitz_graph(
    half_width: f64,
    cells: usize,
    rng: &mut impl Rng,
    base: f64,
    slope: f64,
    modes: usize,
) -> Result<FlatGraph> {
    let waves: Vec<(Spatial, f64, f64)> = (0..modes)
        .map(|_| {
            let q = random_direction(Dim::Two, rng);
            let k = rng.gen_range(1.0..4.0);
            ([k * q[0], k * q[1], 0.0], rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(-1.0..1.0))
        })
        .collect();
    let total: f64 = waves.iter().map(|(q, _, a)| a.abs() * q[0].hypot(q[1])).sum();
    let scale = if total > 0.0 { slope * rng.gen_range(0.3..1.0) / total } else { 0.0 };
    FlatGraph::from_fn(half_width, cells, |x| {
        base + waves.iter().map(|(q, ph, a)| scale * a * (q[0] * x[0] + q[1] * x[1] + ph).sin()).sum::<f64>()
    })
}
