//! Commands on spacelike graphs.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use lightcone_core::achronal::{
    area_flat, check_cone_graph, check_hyperboloid_graph, check_infinity_perimeter, push_to_hyperboloid,
    read_flat_graph, read_hyperbolic_graph, spanning_disk, FlatGraph, HyperbolicGraph,
};
use lightcone_core::geometry::Dim;
use lightcone_core::random::{random_lipschitz_graph, seeded};
use rand::Rng;
use serde_json::json;

use crate::inputs;
use crate::report::{Check, Report};
use crate::settings::{Settings, Shape};

const SLOPE: f64 = 0.9;

fn flat_graph(s: &Settings) -> Result<Option<FlatGraph>> {
    s.graph
        .as_ref()
        .map(|path| read_flat_graph(path).with_context(|| format!("reading graph {}", path.display())))
        .transpose()
}

/// Graphs from `--graph`, or random graphs inside the cone of the profile.
pub fn verify_achronal_cmd(s: &Settings) -> Result<Report> {
    let cone = inputs::profile(s, Shape::Const, 512)?.profile;
    if cone.dim() != Dim::Two {
        bail!("flat-chart graphs are n = 2 only");
    }
    let tol = s.tolerance.unwrap_or(1e-3);
    let mut csv = String::from("case,area,bound,ratio,contained\n");
    let mut report = Report::default();
    if let Some(g) = flat_graph(s)? {
        let c = check_cone_graph(&g, &cone)?;
        let _ = writeln!(csv, "0,{},{},{},{}", c.area, c.bound, c.ratio, c.contained);
        report.results = json!({ "cases": 1, "check": c });
        report = report
            .check(Check::at_least("graph inside the cone", f64::from(u8::from(c.contained)), 1.0))
            .check(Check::at_most("area over bound", c.ratio, 1.0 + tol));
        return Ok(report.file("cases.csv", csv));
    }
    let mut rng = seeded(s.seed_for("verify-achronal")?);
    let (half_width, cells) = (s.half_width.unwrap_or(1.2), s.cells.unwrap_or(120));
    let wanted = s.cases.unwrap_or(30);
    let (mut accepted, mut drawn, mut worst) = (0usize, 0usize, 0.0f64);
    // Graphs leaving the cone do not meet the hypothesis and are redrawn.
    while accepted < wanted && drawn < 50 * wanted {
        drawn += 1;
        let base = rng.gen_range(0.4..1.3) * cone.min_value();
        let g = random_lipschitz_graph(half_width, cells, &mut rng, base, SLOPE, 6)?;
        let c = check_cone_graph(&g, &cone)?;
        let _ = writeln!(csv, "{},{},{},{},{}", drawn - 1, c.area, c.bound, c.ratio, c.contained);
        if c.contained {
            accepted += 1;
            worst = worst.max(c.ratio);
        }
    }
    report.results = json!({ "cases": accepted, "drawn": drawn, "max_ratio": worst });
    Ok(report
        .check(Check::at_least("graphs inside the cone", accepted as f64, wanted as f64))
        .check(Check::at_most("largest area over bound", worst, 1.0 + tol))
        .file("cases.csv", csv))
}

/// `--graph`, or the family `c / (cosh s + k sinh s cos theta)`.
pub fn verify_infinity_cmd(s: &Settings) -> Result<Report> {
    let g = match &s.graph {
        Some(path) => read_hyperbolic_graph(path).with_context(|| format!("reading graph {}", path.display()))?,
        None => {
            let (c, k) = (s.c.unwrap_or(1.0), s.k.unwrap_or(0.3));
            let grid = inputs::directions(s, 256)?;
            HyperbolicGraph::from_fn(s.s_max.unwrap_or(10.0), s.shells.unwrap_or(1000), grid, move |r, d| {
                c / (r.cosh() + k * r.sinh() * d[0])
            })?
        }
    };
    let c = check_infinity_perimeter(&g)?;
    Ok(Report::new(json!({ "s_max": g.s_max(), "shells": g.shells(), "check": c })).check(Check::at_most(
        "area over perimeter bound",
        c.ratio,
        1.0 + s.tolerance.unwrap_or(1e-2),
    )))
}

/// Spacelike graph spanning the rim of the ball of radius `delta` about e0:
/// `cosh delta + a w(x) (rho^2 - |x|^2)` over `|x| < rho = sinh delta`.
fn random_spanning_graph(rng: &mut impl Rng, delta: f64, half_width: f64, cells: usize) -> Result<FlatGraph> {
    let rho = delta.sinh();
    let w = random_lipschitz_graph(half_width, cells, rng, 0.0, SLOPE, 6)?;
    // |grad w| and |w| are at most SLOPE, which bounds the product's slope.
    let amp = rng.gen_range(-1.0..1.0) * 0.9 / (SLOPE * (rho * rho + 2.0 * rho));
    let nu = (0..w.len())
        .map(|k| {
            let x = w.node(k);
            delta.cosh() + amp * w.values()[k] * (rho * rho - x[0] * x[0] - x[1] * x[1])
        })
        .collect();
    Ok(w.with_values(nu)?.with_level_fn(|x| rho * rho - x[0] * x[0] - x[1] * x[1])?)
}

/// Graphs from `--graph` against the set, or the spanning disk and random
/// spanning graphs of the ball of radius `--delta`.
pub fn verify_hyp_disk_cmd(s: &Settings) -> Result<Report> {
    let (e, delta) = inputs::hyperbolic_set(s)?;
    if e.dim() != Dim::Two {
        bail!("flat-chart graphs are n = 2 only");
    }
    let res = inputs::hyp_resolution(s, Dim::Two)?;
    let tol = s.tolerance.unwrap_or(1e-2);
    let (half_width, cells) = (s.half_width.unwrap_or(1.0), s.cells.unwrap_or(160));
    let graphs = match (flat_graph(s)?, delta) {
        (Some(g), _) => vec![g],
        (None, Some(delta)) => {
            let mut rng = seeded(s.seed_for("verify-hyp-disk")?);
            let mut gs = vec![spanning_disk(delta, half_width, cells)?];
            for _ in 0..s.cases.unwrap_or(20) {
                gs.push(random_spanning_graph(&mut rng, delta, half_width, cells)?);
            }
            gs
        }
        (None, None) => bail!("a set file needs a --graph to check against"),
    };
    // Lattice error of the area quadrature, measured on a disk of known area.
    let probe = 0.7f64;
    let eps_area =
        (area_flat(&spanning_disk(probe, half_width, cells)?)? - std::f64::consts::PI * probe.sinh().powi(2)).abs();
    let mut csv = String::from("case,area,bound_a,bound_b,ratio,contained,push_gain\n");
    let (mut worst, mut outside, mut min_gain) = (0.0f64, 0usize, f64::INFINITY);
    for (i, g) in graphs.iter().enumerate() {
        let c = check_hyperboloid_graph(g, &e, &res)?;
        let p = push_to_hyperboloid(g)?;
        let gain = p.pushed_area - p.original_area;
        let b = c.bound_b.unwrap_or(f64::NAN);
        let _ = writeln!(csv, "{i},{},{},{b},{},{},{gain}", c.area, c.bound, c.ratio, c.contained);
        worst = worst.max(c.ratio);
        outside += usize::from(!c.contained);
        min_gain = min_gain.min(gain);
    }
    Ok(Report::new(json!({
        "cases": graphs.len(),
        "max_ratio": worst,
        "outside": outside,
        "min_push_gain": min_gain,
        "eps_area": eps_area,
    }))
    .check(Check::at_most("graphs outside the domain of dependence", outside as f64, 0.0))
    .check(Check::at_most("largest area over bound", worst, 1.0 + tol))
    .check(Check::at_least("smallest push-up gain", min_gain, -eps_area))
    .file("cases.csv", csv))
}
