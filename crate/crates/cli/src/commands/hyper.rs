//! Commands on sets in the unit hyperboloid.

use std::fmt::Write as _;

use anyhow::Result;
use lightcone_core::geometry::Dim;
use lightcone_core::hyperboloid::{
    ball_diamond_volume, hyp_distance, hyp_isoperimetric_check, GeodesicBall, HyperbolicSet,
};
use lightcone_core::random::{random_direction, seeded};
use rand::Rng;
use serde_json::json;

use crate::inputs::{self, dim};
use crate::report::{Check, Report};
use crate::settings::Settings;

pub fn hyp_dod_cmd(s: &Settings) -> Result<Report> {
    let (e, delta) = inputs::hyperbolic_set(s)?;
    let res = inputs::hyp_resolution(s, e.dim())?;
    let c = hyp_isoperimetric_check(&e, &res)?;
    let oracle = delta.map(|d| ball_diamond_volume(e.dim(), d));
    let rel_err = oracle.map(|o| (c.dod_volume - o).abs() / o);
    let mut report = Report::new(json!({
        "n": e.dim().n(),
        "directions": res.directions.len(),
        "radial": res.radial_nodes,
        "dod_volume": c.dod_volume,
        "set_volume": c.set_volume,
        "perimeter": c.perimeter,
        "oracle": oracle,
        "rel_err": rel_err,
    }));
    if let Some(e) = rel_err {
        report = report.check(Check::at_most("volume relative error", e, s.tolerance.unwrap_or(1e-2)));
    }
    Ok(report)
}

/// One to three disjoint geodesic balls of radius in [0.2, 0.6] centred
/// within distance 1 of e0.
fn random_union(rng: &mut impl Rng, dim: Dim) -> Result<HyperbolicSet> {
    let count = rng.gen_range(1..=3);
    let mut balls: Vec<GeodesicBall> = Vec::new();
    while balls.len() < count {
        let d = random_direction(dim, rng);
        let b = GeodesicBall::at(rng.gen_range(0.0..1.0), &d, rng.gen_range(0.2..0.6))?;
        let apart = |o: &GeodesicBall| hyp_distance(&o.center, &b.center).map(|r| r > o.radius + b.radius + 1e-3);
        if balls.iter().map(apart).collect::<lightcone_core::Result<Vec<bool>>>()?.into_iter().all(|a| a) {
            balls.push(b);
        }
    }
    Ok(HyperbolicSet::balls(dim, balls))
}

/// The set of `--set`, or random ball unions when none is given.
pub fn verify_hyperboloid_cmd(s: &Settings) -> Result<Report> {
    let sets = if s.set.is_some() {
        vec![inputs::hyperbolic_set(s)?.0]
    } else {
        let dim = dim(s)?;
        let mut rng = seeded(s.seed_for("verify-hyperboloid")?);
        (0..s.cases.unwrap_or(10)).map(|_| random_union(&mut rng, dim)).collect::<Result<Vec<_>>>()?
    };
    let mut csv = String::from(
        "case,set_volume,perimeter,dod_volume,lhs,rhs,ratio,exponential_volume_bound,exponential_bound_holds\n",
    );
    let (mut worst, mut held): (f64, usize) = (0.0, 0);
    for (i, e) in sets.iter().enumerate() {
        let res = inputs::hyp_resolution(s, e.dim())?;
        let c = hyp_isoperimetric_check(e, &res)?;
        worst = worst.max(c.ratio);
        held += usize::from(c.exponential_bound_holds);
        let _ = writeln!(
            csv,
            "{i},{},{},{},{},{},{},{},{}",
            c.set_volume,
            c.perimeter,
            c.dod_volume,
            c.lhs,
            c.rhs,
            c.ratio,
            c.exponential_volume_bound,
            c.exponential_bound_holds
        );
    }
    Ok(Report::new(json!({ "cases": sets.len(), "max_ratio": worst, "exponential_bound_held": held }))
        .check(Check::at_most("largest ratio", worst, 1.0 + s.tolerance.unwrap_or(1e-2)))
        .check(Check::at_least("sets within the exponential volume bound", held as f64, sets.len() as f64))
        .file("cases.csv", csv))
}
