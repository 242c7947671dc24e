//! Commands on single lightcone profiles and random batches of them.

use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::Result;
use lightcone_core::geometry::{sphere_grid, Dim, SpacetimeVector};
use lightcone_core::lightcone::io::{profile_to_string, read_profile};
use lightcone_core::lightcone::{
    cap_profile, cap_volume_oracle, default_radial_nodes, dod_symdiff, dod_volume, euclid_check, is_plump,
    isoperimetric_check, matched_cap_height, perimeter, ConeProfile,
};
use lightcone_core::polarization::{
    equal_perimeter_plane, polarization_descent, polarize_profile, reflect_profile, symmetrize_profile,
    ConformalReflection, DescentSchedule, SymmetrizeSign,
};
use lightcone_core::random::{random_profile, seeded};
use serde_json::json;

use crate::inputs::{self, dim, eps_grid, ProfileInput};
use crate::report::{Check, Report};
use crate::settings::{Settings, Shape, Sign};

fn radial(s: &Settings, p: &ConeProfile) -> usize {
    s.radial.unwrap_or_else(|| default_radial_nodes(p.dim()))
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn perimeter_cmd(s: &Settings) -> Result<Report> {
    let ProfileInput { profile: p, cap_height } = inputs::profile(s, Shape::Const, 1024)?;
    let per = perimeter(&p);
    let oracle = cap_height.map(|l| p.dim().sphere_area() * l.powi(p.dim().n() as i32 - 1));
    let mut report = Report::new(json!({
        "n": p.dim().n(),
        "nodes": p.grid().len(),
        "perimeter": per,
        "oracle": oracle,
        "plump": is_plump(&p),
        "min": p.min_value(),
        "max": p.max_value(),
        "matched_cap_height": matched_cap_height(&p),
    }));
    if let Some(o) = oracle {
        report =
            report.check(Check::at_most("perimeter relative error", relative(per, o), s.tolerance.unwrap_or(1e-3)));
    }
    Ok(report)
}

pub fn dod_volume_cmd(s: &Settings) -> Result<Report> {
    let ProfileInput { profile: p, cap_height } = inputs::profile(s, Shape::Const, 1024)?;
    let radial = radial(s, &p);
    let volume = dod_volume(&p, radial)?;
    let oracle = cap_height.map(|l| cap_volume_oracle(p.dim(), l));
    let rel_err = oracle.map(|o| relative(volume, o));
    let mut report = Report::new(json!({
        "n": p.dim().n(),
        "directions": p.grid().len(),
        "radial": radial,
        "volume": volume,
        "oracle": oracle,
        "rel_err": rel_err,
    }));
    if let Some(e) = rel_err {
        report = report.check(Check::at_most("volume relative error", e, s.tolerance.unwrap_or(1e-3)));
    }
    Ok(report)
}

/// Against `--other`, or the cap of matched perimeter when no second file is given.
pub fn symdiff_cmd(s: &Settings) -> Result<Report> {
    let p = inputs::profile(s, Shape::Const, 1024)?.profile;
    let q = match &s.other {
        Some(path) => read_profile(path)?,
        None => cap_profile(&SpacetimeVector::time_unit(), matched_cap_height(&p), p.grid().clone())?,
    };
    let radial = radial(s, &p);
    let (vp, vq) = (dod_volume(&p, radial)?, dod_volume(&q, radial)?);
    let d = dod_symdiff(&p, &q, radial)?;
    // |A - B| >= ||A| - |B||, up to the quadrature noise of the volumes.
    let slack = s.tolerance.unwrap_or(1e-9) * vp.max(vq);
    Ok(Report::new(json!({
        "volume": vp,
        "other_volume": vq,
        "other": if s.other.is_some() { "file" } else { "matched cap" },
        "symdiff": d,
    }))
    .check(Check::at_least("symdiff minus volume difference", d - (vp - vq).abs(), -slack)))
}

pub fn polarize_cmd(s: &Settings) -> Result<Report> {
    let p = inputs::profile(s, Shape::Cos2, 1024)?.profile;
    let plane = inputs::reflection_plane(s)?;
    let q = polarize_profile(&p, &ConformalReflection::new(&plane, p.grid().clone()))?;
    let radial = radial(s, &p);
    let (vp, vq) = (dod_volume(&p, radial)?, dod_volume(&q, radial)?);
    let eps = eps_grid(&p, radial)?;
    let drift = relative(perimeter(&q), perimeter(&p));
    Ok(Report::new(json!({
        "normal": plane.normal(),
        "perimeter_before": perimeter(&p),
        "perimeter_after": perimeter(&q),
        "volume_before": vp,
        "volume_after": vq,
        "eps_grid": eps,
    }))
    .check(Check::at_most("perimeter relative change", drift, s.tolerance.unwrap_or(1e-4)))
    .check(Check::at_least("volume gain", vq - vp, -eps))
    .file("polarized.csv", profile_to_string(&q)))
}

pub fn symmetrize_cmd(s: &Settings) -> Result<Report> {
    let p = inputs::profile(s, Shape::Cos2, 1024)?.profile;
    let h = inputs::hyperplane(s)?;
    let sign = match s.sign.unwrap_or(Sign::Plus) {
        Sign::Plus => SymmetrizeSign::Plus,
        Sign::Minus => SymmetrizeSign::Minus,
    };
    let q = symmetrize_profile(&p, &h, sign)?;
    let back = reflect_profile(&q, &ConformalReflection::from_hyperplane(&h, p.grid().clone()))?;
    let asym = back.values().iter().zip(q.values()).map(|(a, b)| (a - b).abs() / b).fold(0.0, f64::max);
    let radial = radial(s, &p);
    Ok(Report::new(json!({
        "normal": h.normal(),
        "perimeter_before": perimeter(&p),
        "perimeter_after": perimeter(&q),
        "volume_before": dod_volume(&p, radial)?,
        "volume_after": dod_volume(&q, radial)?,
    }))
    .check(Check::at_most("relative asymmetry under the mirror", asym, s.tolerance.unwrap_or(1e-3)))
    .file("symmetrized.csv", profile_to_string(&q)))
}

/// Mirror in the plane spanned by e0 and the spatial direction of `--angle`.
pub fn equal_plane_cmd(s: &Settings) -> Result<Report> {
    let p = inputs::profile(s, Shape::Cos2, 1024)?.profile;
    let b = SpacetimeVector::new(0.0, inputs::direction(s));
    let plane = equal_perimeter_plane(&p, &SpacetimeVector::time_unit(), &b)?;
    let total = perimeter(&p);
    let split = 0.5 * (plane.plus_share - plane.minus_share).abs() / total;
    Ok(Report::new(json!({ "perimeter": total, "plane": plane })).check(Check::at_most(
        "relative split error",
        split,
        s.tolerance.unwrap_or(1e-10),
    )))
}

pub fn descent_cmd(s: &Settings) -> Result<Report> {
    let p = inputs::profile(s, Shape::Cos2, 256)?.profile;
    let radial = s.radial.unwrap_or(256);
    let mut schedule = DescentSchedule::new(s.iters.unwrap_or(300), s.seed_for("descent")?, radial);
    if let Some(a) = s.alpha_max {
        schedule.alpha_max = a;
    }
    let (last, trace) = polarization_descent(&p, &schedule)?;
    let eps = eps_grid(&p, radial)?;
    let drop = trace.max_volume_drop();
    Ok(Report::new(json!({
        "iterations": trace.records.len().saturating_sub(1),
        "initial_volume": trace.records.first().map(|r| r.volume),
        "final_volume": trace.final_volume(),
        "cap_volume": trace.cap_volume,
        "cap_height": trace.cap_height,
        "final_over_cap": trace.final_volume() / trace.cap_volume,
        "max_volume_drop": drop,
        "eps_grid": eps,
    }))
    .check(Check::at_most("largest volume drop", drop, eps))
    .file("trace.csv", trace.to_csv())
    .file("profile.csv", profile_to_string(&last)))
}

fn random_profiles(s: &Settings, command: &str) -> Result<Vec<ConeProfile>> {
    let dim = dim(s)?;
    let grid = inputs::directions(s, if dim == Dim::Two { 512 } else { 642 })?;
    let mut rng = seeded(s.seed_for(command)?);
    (0..s.cases.unwrap_or(50))
        .map(|_| Ok(random_profile(grid.clone(), &mut rng, s.modes.unwrap_or(5), s.amplitude.unwrap_or(0.4))?))
        .collect()
}

fn batch_radial(s: &Settings) -> Result<usize> {
    Ok(s.radial.unwrap_or(if dim(s)? == Dim::Two { 512 } else { 128 }))
}

pub fn verify_isoperimetric_cmd(s: &Settings) -> Result<Report> {
    let radial = batch_radial(s)?;
    let mut csv = String::from("case,perimeter,volume,lhs,rhs,ratio\n");
    let mut worst: f64 = 0.0;
    let profiles = random_profiles(s, "verify-isoperimetric")?;
    for (i, p) in profiles.iter().enumerate() {
        let c = isoperimetric_check(p, radial)?;
        worst = worst.max(c.ratio);
        let _ = writeln!(csv, "{i},{},{},{},{},{}", c.perimeter, c.volume, c.lhs, c.rhs, c.ratio);
    }
    Ok(Report::new(json!({ "cases": profiles.len(), "radial": radial, "max_ratio": worst }))
        .check(Check::at_most("largest ratio", worst, 1.0 + s.tolerance.unwrap_or(1e-2)))
        .file("cases.csv", csv))
}

pub fn verify_euclid_cmd(s: &Settings) -> Result<Report> {
    let radial = batch_radial(s)?;
    let mut csv = String::from("case,perimeter,euclidean_area,volume,lhs,rhs,ratio\n");
    let mut worst: f64 = 0.0;
    let profiles = random_profiles(s, "verify-euclid")?;
    for (i, p) in profiles.iter().enumerate() {
        let c = euclid_check(p, radial)?;
        worst = worst.max(c.ratio);
        let _ = writeln!(csv, "{i},{},{},{},{},{},{}", c.perimeter, c.euclidean_area, c.volume, c.lhs, c.rhs, c.ratio);
    }
    Ok(Report::new(json!({ "cases": profiles.len(), "radial": radial, "max_ratio": worst }))
        .check(Check::at_most("largest ratio", worst, 1.0 + s.tolerance.unwrap_or(1e-2)))
        .file("cases.csv", csv))
}

/// Unit cone volume at successively finer grids up to `--grid`.
pub fn convergence_cmd(s: &Settings) -> Result<Report> {
    let dim = dim(s)?;
    let levels: Vec<(usize, usize)> = match dim {
        Dim::Two => {
            let top = s.grid.unwrap_or(1024);
            std::iter::successors(Some(128usize), |n| Some(2 * n)).take_while(|n| *n <= top).map(|n| (n, n)).collect()
        }
        Dim::Three => {
            let top = s.grid.unwrap_or(2562);
            [(162, 64), (642, 128), (2562, 256)].into_iter().filter(|(n, _)| *n <= top).collect()
        }
    };
    let oracle = cap_volume_oracle(dim, 1.0);
    let mut csv = String::from("directions,radial,volume,rel_err,order\n");
    let mut errors = Vec::new();
    for (nodes, radial) in &levels {
        let grid = Arc::new(sphere_grid(dim, *nodes)?);
        let volume = dod_volume(&ConeProfile::constant(grid.clone(), 1.0)?, s.radial.unwrap_or(*radial))?;
        let err = relative(volume, oracle);
        let order = errors.last().map(|prev: &f64| (prev / err).log2());
        let _ = writeln!(
            csv,
            "{},{},{volume},{err},{}",
            grid.len(),
            s.radial.unwrap_or(*radial),
            order.map_or(String::new(), |o| o.to_string())
        );
        errors.push(err);
    }
    let worst_growth = errors.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    let finest = errors.last().copied().unwrap_or(f64::NAN);
    let default_tol = if dim == Dim::Two { 1e-3 } else { 5e-3 };
    let mut report = Report::new(json!({ "oracle": oracle, "levels": levels.len(), "finest_rel_err": finest }))
        .check(Check::at_most("finest relative error", finest, s.tolerance.unwrap_or(default_tol)));
    if errors.len() > 1 {
        report = report.check(Check::at_most("largest error ratio between levels", worst_growth, 1.0));
    }
    Ok(report.file("cases.csv", csv))
}
