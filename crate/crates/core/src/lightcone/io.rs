//! Profile files.
//!
//! n = 2: CSV records `theta,value` with angles in `[0, 2pi)` strictly
//! increasing; an optional `theta,value` header is skipped.
//! n = 3: records `v x y z` (icosphere nodes, in grid order) and `f value`;
//! the k-th `f` record belongs to the k-th `v` record.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use super::profile::ConeProfile;
use crate::error::{parse_err, Error, Result};
use crate::geometry::{Dim, SphereGrid};
use crate::text::{content_lines, fields, is_header, parse_f64};

pub fn parse_profile(text: &str) -> Result<ConeProfile> {
    let first = content_lines(text).next().ok_or_else(|| parse_err(1, "empty profile file"))?;
    if first.1.starts_with("v ") || first.1.starts_with("f ") {
        parse_mesh_profile(text)
    } else {
        parse_circle_profile(text)
    }
}

fn parse_circle_profile(text: &str) -> Result<ConeProfile> {
    let mut angles = Vec::new();
    let mut values = Vec::new();
    let mut last_line = 0;
    for (k, (line, rec)) in content_lines(text).enumerate() {
        last_line = line;
        if k == 0 && is_header(rec) {
            continue;
        }
        let f = fields(line, rec, &[2])?;
        let theta = parse_f64(line, f[0], "theta")?;
        let value = parse_f64(line, f[1], "value")?;
        if !(0.0..std::f64::consts::TAU).contains(&theta) {
            return Err(parse_err(line, format!("theta {theta} outside [0, 2pi)")));
        }
        if let Some(prev) = angles.last() {
            if theta <= *prev {
                return Err(parse_err(line, "theta must be strictly increasing"));
            }
        }
        if value <= 0.0 {
            return Err(parse_err(line, format!("value {value} must be positive")));
        }
        angles.push(theta);
        values.push(value);
    }
    let grid = SphereGrid::circle_from_angles(angles).map_err(|e| parse_err(last_line, e.to_string()))?;
    ConeProfile::sampled(Arc::new(grid), values)
}

fn parse_mesh_profile(text: &str) -> Result<ConeProfile> {
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    let mut last_line = 0;
    for (line, rec) in content_lines(text) {
        last_line = line;
        let parts: Vec<&str> = rec.split_whitespace().collect();
        match parts.as_slice() {
            ["v", x, y, z] => {
                let p = [parse_f64(line, x, "x")?, parse_f64(line, y, "y")?, parse_f64(line, z, "z")?];
                let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                if (r - 1.0).abs() > 1e-9 {
                    return Err(parse_err(line, format!("node has length {r}, expected 1")));
                }
                nodes.push(p);
            }
            ["f", v] => {
                let v = parse_f64(line, v, "value")?;
                if v <= 0.0 {
                    return Err(parse_err(line, format!("value {v} must be positive")));
                }
                values.push(v);
            }
            _ => return Err(parse_err(line, "expected `v x y z` or `f value`")),
        }
    }
    if nodes.len() != values.len() {
        return Err(parse_err(last_line, format!("{} nodes but {} values", nodes.len(), values.len())));
    }
    let grid = SphereGrid::icosphere_from_nodes(&nodes).map_err(|e| parse_err(last_line, e.to_string()))?;
    ConeProfile::sampled(Arc::new(grid), values)
}

pub fn profile_to_string(p: &ConeProfile) -> String {
    let mut s = String::new();
    match p.dim() {
        Dim::Two => {
            s.push_str("theta,value\n");
            let angles = p.grid().angles().expect("circle grid");
            for (a, v) in angles.iter().zip(p.values()) {
                let _ = writeln!(s, "{a:.17e},{v:.17e}");
            }
        }
        Dim::Three => {
            for d in p.grid().nodes() {
                let _ = writeln!(s, "v {:.17e} {:.17e} {:.17e}", d[0], d[1], d[2]);
            }
            for v in p.values() {
                let _ = writeln!(s, "f {v:.17e}");
            }
        }
    }
    s
}

pub fn read_profile(path: &Path) -> Result<ConeProfile> {
    parse_profile(&std::fs::read_to_string(path)?)
}

pub fn write_profile(p: &ConeProfile, path: &Path) -> Result<()> {
    std::fs::write(path, profile_to_string(p)).map_err(Error::from)
}
