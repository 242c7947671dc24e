//! Text formats for hyperboloid sets.
//!
//! Ball unions are CSV records `s,theta,delta` (n = 2) or
//! `s,theta,phi,delta` (n = 3, theta azimuth and phi polar angle), giving each
//! centre in geodesic polar coordinates about `e0`.
//!
//! Grid sets start with `grid <n> <s_max> <shells> <directions>` followed by
//! one line per shell holding run lengths of alternating empty and occupied
//! cells, starting with empty.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use super::set::{GeodesicBall, HyperbolicGrid, HyperbolicSet};
use crate::error::{parse_err, Result};
use crate::geometry::sphere::icosphere_node_count;
use crate::geometry::{Dim, Spatial, SphereGrid};
use crate::text::{content_lines, fields, is_header, parse_f64, parse_usize};

fn direction(theta: f64, phi: Option<f64>) -> Spatial {
    match phi {
        None => [theta.cos(), theta.sin(), 0.0],
        Some(phi) => [phi.sin() * theta.cos(), phi.sin() * theta.sin(), phi.cos()],
    }
}

pub fn parse_balls(text: &str) -> Result<HyperbolicSet> {
    let mut dim = None;
    let mut balls = Vec::new();
    for (line, rec) in content_lines(text) {
        if is_header(rec) {
            continue;
        }
        let f = fields(line, rec, &[3, 4])?;
        let d = if f.len() == 3 { Dim::Two } else { Dim::Three };
        if *dim.get_or_insert(d) != d {
            return Err(parse_err(line, "mixed 2 and 3 dimensional records"));
        }
        let s = parse_f64(line, f[0], "s")?;
        let theta = parse_f64(line, f[1], "theta")?;
        let phi = if f.len() == 4 { Some(parse_f64(line, f[2], "phi")?) } else { None };
        let delta = parse_f64(line, f[f.len() - 1], "delta")?;
        if s < 0.0 {
            return Err(parse_err(line, "s must be non-negative"));
        }
        let ball = GeodesicBall::at(s, &direction(theta, phi), delta).map_err(|e| parse_err(line, e.to_string()))?;
        balls.push(ball);
    }
    let dim = dim.ok_or_else(|| parse_err(0, "no balls"))?;
    Ok(HyperbolicSet::balls(dim, balls))
}

pub fn parse_grid(text: &str) -> Result<HyperbolicGrid> {
    let mut lines = content_lines(text);
    let (line, head) = lines.next().ok_or_else(|| parse_err(0, "empty grid file"))?;
    let parts: Vec<&str> = head.split_whitespace().collect();
    if parts.len() != 5 || parts[0] != "grid" {
        return Err(parse_err(line, "expected `grid <n> <s_max> <shells> <directions>`"));
    }
    let n = parse_usize(line, parts[1], "n")?;
    let dim = Dim::from_n(n).map_err(|e| parse_err(line, e.to_string()))?;
    let s_max = parse_f64(line, parts[2], "s_max")?;
    let shells = parse_usize(line, parts[3], "shells")?;
    let m = parse_usize(line, parts[4], "directions")?;
    let sphere = match dim {
        Dim::Two => SphereGrid::circle(m),
        Dim::Three => {
            let level = (0..8)
                .find(|&l| icosphere_node_count(l) == m)
                .ok_or_else(|| parse_err(line, format!("{m} is not an icosphere node count")))?;
            SphereGrid::icosphere(level)
        }
    };
    let mut occupied = Vec::with_capacity(shells * m);
    let mut rows = 0;
    for (line, rec) in lines {
        let mut filled = false;
        let start = occupied.len();
        for tok in rec.split_whitespace() {
            let run = parse_usize(line, tok, "run length")?;
            occupied.extend(std::iter::repeat(filled).take(run));
            filled = !filled;
        }
        if occupied.len() - start != m {
            return Err(parse_err(line, format!("row covers {} cells, expected {m}", occupied.len() - start)));
        }
        rows += 1;
    }
    if rows != shells {
        return Err(parse_err(0, format!("found {rows} shells, header declares {shells}")));
    }
    HyperbolicGrid::from_occupancy(s_max, shells, Arc::new(sphere), occupied)
}

pub fn grid_to_string(g: &HyperbolicGrid) -> String {
    let m = g.sphere().len();
    let mut s = format!("grid {} {} {} {}\n", g.dim().n(), g.s_max(), g.radial(), m);
    for row in g.occupied().chunks(m) {
        let mut runs = Vec::new();
        let mut filled = false;
        let mut count = 0usize;
        for &b in row {
            if b == filled {
                count += 1;
            } else {
                runs.push(count);
                filled = b;
                count = 1;
            }
        }
        runs.push(count);
        let line: Vec<String> = runs.iter().map(|r| r.to_string()).collect();
        let _ = writeln!(s, "{}", line.join(" "));
    }
    s
}

/// Reads either format, picking the grid reader when the first record starts with `grid`.
pub fn read_hyperbolic_set(path: &Path) -> Result<HyperbolicSet> {
    let text = std::fs::read_to_string(path)?;
    let grid = content_lines(&text).next().map(|(_, l)| l.starts_with("grid")).unwrap_or(false);
    if grid {
        Ok(HyperbolicSet::Grid(parse_grid(&text)?))
    } else {
        parse_balls(&text)
    }
}

impl From<HyperbolicGrid> for HyperbolicSet {
    fn from(g: HyperbolicGrid) -> Self {
        HyperbolicSet::Grid(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::geometry::{eta, SpacetimeVector};

    #[test]
    fn ball_records() {
        let e = parse_balls("s,theta,delta\n0,0,0.7\n2.0,3.14159,0.3\n").unwrap();
        match e {
            HyperbolicSet::Balls { dim, balls } => {
                assert_eq!(dim, Dim::Two);
                assert_eq!(balls.len(), 2);
                assert!((balls[1].center.t - 2f64.cosh()).abs() < 1e-12);
            }
            _ => panic!(),
        }
        let err = parse_balls("0,0,0.7\n1,2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_balls("0,0,-1\n").is_err());
    }

    #[test]
    fn grid_round_trip() {
        let g = Arc::new(SphereGrid::circle(16));
        let e0 = SpacetimeVector::time_unit();
        let grid = HyperbolicGrid::from_fn(1.0, 10, g, |p| -eta(p, &e0) < 0.45f64.cosh() && p.x[0] > -0.2).unwrap();
        let text = grid_to_string(&grid);
        assert_eq!(parse_grid(&text).unwrap(), grid);
        assert!(matches!(parse_grid("grid 2 1.0 1 4\n1 2\n"), Err(Error::Parse { line: 2, .. })));
    }
}
