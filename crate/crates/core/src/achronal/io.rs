//! Text formats for achronal graphs.
//!
//! Flat graphs start with `spacing <h>` and list one node per record,
//! `x1,x2,nu` or `x1,x2,nu,level`. The nodes must fill a square lattice
//! `[-L, L]^2` with step `h`; when the level column is present the domain is
//! where it is positive.
//!
//! Hyperbolic graphs (n = 2) are records `s,theta,f` on a tensor grid of
//! equally spaced shells starting at `s = 0` and increasing angles in
//! `[0, 2pi)`.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use super::flat::FlatGraph;
use super::hyperbolic::HyperbolicGraph;
use crate::error::{parse_err, Result};
use crate::geometry::SphereGrid;
use crate::text::{content_lines, fields, is_header, parse_f64};

/// Relative slack when snapping coordinates to the lattice.
const SNAP_TOL: f64 = 1e-6;

pub fn parse_flat_graph(text: &str) -> Result<FlatGraph> {
    let mut lines = content_lines(text);
    let (line, head) = lines.next().ok_or_else(|| parse_err(0, "empty graph file"))?;
    let parts: Vec<&str> = head.split_whitespace().collect();
    if parts.len() != 2 || parts[0] != "spacing" {
        return Err(parse_err(line, "expected `spacing <h>`"));
    }
    let h = parse_f64(line, parts[1], "spacing")?;
    if h <= 0.0 {
        return Err(parse_err(line, "spacing must be positive"));
    }
    let mut records = Vec::new();
    let mut with_level = None;
    for (line, rec) in lines {
        if is_header(rec) {
            continue;
        }
        let f = fields(line, rec, &[2, 3, 4])?;
        if f.len() == 2 {
            return Err(parse_err(line, "flat graphs need two spatial coordinates"));
        }
        if *with_level.get_or_insert(f.len() == 4) != (f.len() == 4) {
            return Err(parse_err(line, "level column present on some records only"));
        }
        let x1 = parse_f64(line, f[0], "x1")?;
        let x2 = parse_f64(line, f[1], "x2")?;
        let nu = parse_f64(line, f[2], "nu")?;
        let level = if f.len() == 4 { parse_f64(line, f[3], "level")? } else { 1.0 };
        records.push((line, [x1, x2], nu, level));
    }
    if records.is_empty() {
        return Err(parse_err(0, "no graph records"));
    }
    let half = records.iter().map(|r| r.1[0].abs().max(r.1[1].abs())).fold(0.0, f64::max);
    let steps = 2.0 * half / h;
    let cells = steps.round() as usize;
    if cells < 2 || (steps - cells as f64).abs() > SNAP_TOL * steps.max(1.0) {
        return Err(parse_err(0, format!("extent {half} is not a whole number of steps {h}")));
    }
    let side = cells + 1;
    let mut nu = vec![f64::NAN; side * side];
    let mut level = vec![0.0; side * side];
    for (line, x, v, l) in records {
        let snap = |c: f64| {
            let s = (c + half) / h;
            let i = s.round();
            ((s - i).abs() <= SNAP_TOL).then_some(i as usize)
        };
        let (i, j) = match (snap(x[0]), snap(x[1])) {
            (Some(i), Some(j)) => (i, j),
            _ => return Err(parse_err(line, "node is off the lattice")),
        };
        let k = i + side * j;
        if !nu[k].is_nan() {
            return Err(parse_err(line, "duplicate node"));
        }
        nu[k] = v;
        level[k] = l;
    }
    if let Some(k) = nu.iter().position(|v| v.is_nan()) {
        return Err(parse_err(0, format!("missing node ({}, {})", k % side, k / side)));
    }
    let g = FlatGraph::new(half, cells, nu)?;
    if with_level == Some(true) {
        g.with_level(level)
    } else {
        Ok(g)
    }
}

pub fn flat_graph_to_string(g: &FlatGraph) -> String {
    let mut s = format!("spacing {}\nx1,x2,nu", g.spacing());
    let level = !g.levels().is_empty();
    s.push_str(if level { ",level\n" } else { "\n" });
    for k in 0..g.len() {
        let x = g.node(k);
        let _ = write!(s, "{},{},{}", x[0], x[1], g.values()[k]);
        if level {
            let l = g.levels().iter().map(|l| l[k]).fold(f64::INFINITY, f64::min);
            let _ = write!(s, ",{l}");
        }
        s.push('\n');
    }
    s
}

fn distinct(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    v
}

fn position(sorted: &[f64], x: f64) -> usize {
    let i = sorted.partition_point(|v| *v < x - 1e-12 * x.abs().max(1.0));
    i.min(sorted.len() - 1)
}

pub fn parse_hyperbolic_graph(text: &str) -> Result<HyperbolicGraph> {
    let mut records = Vec::new();
    for (line, rec) in content_lines(text) {
        if is_header(rec) {
            continue;
        }
        let f = fields(line, rec, &[3])?;
        let s = parse_f64(line, f[0], "s")?;
        let theta = parse_f64(line, f[1], "theta")?;
        let v = parse_f64(line, f[2], "f")?;
        if s < 0.0 {
            return Err(parse_err(line, "s must be non-negative"));
        }
        records.push((line, s, theta, v));
    }
    if records.is_empty() {
        return Err(parse_err(0, "no graph records"));
    }
    let radii = distinct(records.iter().map(|r| r.1).collect());
    let angles = distinct(records.iter().map(|r| r.2).collect());
    let shells = radii.len() - 1;
    let s_max = radii[shells];
    let ds = s_max / shells.max(1) as f64;
    if radii[0] != 0.0 || radii.iter().enumerate().any(|(k, s)| (s - k as f64 * ds).abs() > SNAP_TOL * ds) {
        return Err(parse_err(0, "shells must be equally spaced from s = 0"));
    }
    let grid = SphereGrid::circle_from_angles(angles.clone()).map_err(|e| parse_err(0, e.to_string()))?;
    let m = angles.len();
    let mut values = vec![f64::NAN; radii.len() * m];
    for (line, s, theta, v) in records {
        let k = position(&radii, s) * m + position(&angles, theta);
        if !values[k].is_nan() {
            return Err(parse_err(line, "duplicate node"));
        }
        values[k] = v;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(parse_err(0, format!("records do not fill {} shells by {m} angles", radii.len())));
    }
    HyperbolicGraph::new(s_max, shells, Arc::new(grid), values)
}

pub fn hyperbolic_graph_to_string(g: &HyperbolicGraph) -> Option<String> {
    let angles = g.grid().angles()?;
    let mut s = String::from("s,theta,f\n");
    for k in 0..=g.shells() {
        for (i, a) in angles.iter().enumerate() {
            let _ = writeln!(s, "{},{},{}", k as f64 * g.ds(), a, g.value(k, i));
        }
    }
    Some(s)
}

pub fn read_flat_graph(path: &Path) -> Result<FlatGraph> {
    parse_flat_graph(&std::fs::read_to_string(path)?)
}

pub fn read_hyperbolic_graph(path: &Path) -> Result<HyperbolicGraph> {
    parse_hyperbolic_graph(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn flat_round_trip() {
        let g = FlatGraph::from_fn(1.0, 8, |x| 1.0 + 0.1 * x[0])
            .unwrap()
            .with_level_fn(|x| 0.8 - x[0] * x[0] - x[1] * x[1])
            .unwrap();
        let back = parse_flat_graph(&flat_graph_to_string(&g)).unwrap();
        assert!(back.same_lattice(&g));
        for k in 0..g.len() {
            assert!((back.values()[k] - g.values()[k]).abs() < 1e-15);
            assert_eq!(back.in_domain(k), g.in_domain(k));
        }
    }

    #[test]
    fn flat_rejects_gaps_and_stray_nodes() {
        let full = "spacing 1\n-1,-1,1\n0,-1,1\n1,-1,1\n-1,0,1\n0,0,1\n1,0,1\n-1,1,1\n0,1,1\n1,1,1\n";
        assert_eq!(parse_flat_graph(full).unwrap().cells(), 2);
        let gap = full.replace("0,0,1\n", "");
        assert!(matches!(parse_flat_graph(&gap), Err(Error::Parse { line: 0, .. })));
        let stray = full.replace("0,0,1\n", "0.5,0,1\n");
        assert!(matches!(parse_flat_graph(&stray), Err(Error::Parse { line: 6, .. })));
        assert!(matches!(parse_flat_graph("spacing 1\n0,1\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn hyperbolic_round_trip() {
        let grid = Arc::new(SphereGrid::circle(12));
        let g = HyperbolicGraph::from_fn(2.0, 6, grid, |s, d| 0.8 / (s.cosh() + 0.2 * s.sinh() * d[0])).unwrap();
        let back = parse_hyperbolic_graph(&hyperbolic_graph_to_string(&g).unwrap()).unwrap();
        assert_eq!(back.shells(), 6);
        assert!((back.s_max() - 2.0).abs() < 1e-12);
        assert!(back.values().iter().zip(g.values()).all(|(a, b)| (a - b).abs() < 1e-15));
    }
}
