use std::f64::consts::TAU;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Dim, Spatial, SphereGrid};

/// Angular tolerance used to decide that a node sits on a sector boundary.
const BREAK_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileKind {
    /// Nodal values of a continuous interpolant.
    SampledSmooth,
    /// Step profile on the circle with exact jumps.
    PiecewiseSector,
}

/// Step data for n = 2. Arc `k` is the open interval from `breaks[k]` to the
/// next break (cyclically); `points[k]` is the value taken at `breaks[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorData {
    breaks: Vec<f64>,
    arcs: Vec<f64>,
    points: Vec<f64>,
}

impl SectorData {
    pub fn new(breaks: Vec<f64>, arcs: Vec<f64>, points: Vec<f64>) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != arcs.len() || breaks.len() != points.len() {
            return Err(Error::InvalidProfile("sector arrays must be non-empty and of equal length".into()));
        }
        for (i, b) in breaks.iter().enumerate() {
            if !(0.0..TAU).contains(b) || (i > 0 && *b <= breaks[i - 1]) {
                return Err(Error::InvalidProfile("sector breaks must increase within [0, 2pi)".into()));
            }
        }
        check_values(&arcs)?;
        check_values(&points)?;
        Ok(SectorData { breaks, arcs, points })
    }

    /// Right-continuous steps: each break takes the value of the arc it opens.
    pub fn steps(breaks: Vec<f64>, arcs: Vec<f64>) -> Result<Self> {
        let points = arcs.clone();
        Self::new(breaks, arcs, points)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn arcs(&self) -> &[f64] {
        &self.arcs
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    fn arc_before(&self, k: usize) -> f64 {
        self.arcs[(k + self.arcs.len() - 1) % self.arcs.len()]
    }

    pub fn eval_angle(&self, theta: f64) -> f64 {
        let th = theta.rem_euclid(TAU);
        for (k, b) in self.breaks.iter().enumerate() {
            let d = (th - b).abs();
            if d < BREAK_TOL || (TAU - d) < BREAK_TOL {
                return self.points[k];
            }
        }
        let k = self.breaks.partition_point(|b| *b <= th);
        if k == 0 {
            *self.arcs.last().unwrap()
        } else {
            self.arcs[k - 1]
        }
    }

    /// Values that the profile approaches at each break: both one-sided
    /// limits and the point value.
    pub fn boundary_values(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.breaks.len()).flat_map(move |k| {
            let b = self.breaks[k];
            [(b, self.arc_before(k)), (b, self.arcs[k]), (b, self.points[k])]
        })
    }

    fn integral(&self) -> f64 {
        let m = self.breaks.len();
        (0..m)
            .map(|k| {
                let next = if k + 1 == m { self.breaks[0] + TAU } else { self.breaks[k + 1] };
                (next - self.breaks[k]) * self.arcs[k]
            })
            .sum()
    }

    fn with_points(&self, pick: impl Fn(f64, f64, f64) -> f64) -> SectorData {
        let points = (0..self.breaks.len()).map(|k| pick(self.arc_before(k), self.arcs[k], self.points[k])).collect();
        SectorData { breaks: self.breaks.clone(), arcs: self.arcs.clone(), points }
    }
}

fn check_values(values: &[f64]) -> Result<()> {
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() || *v <= 0.0 {
            return Err(Error::InvalidProfile(format!("value {v} at index {i} is not positive and finite")));
        }
    }
    Ok(())
}

/// Profile of a finite lightcone `{ r (1, theta) : r < f(theta) }` sampled on a
/// direction grid. The `closed` flag only matters for envelope operations.
#[derive(Clone, Debug)]
pub struct ConeProfile {
    grid: Arc<SphereGrid>,
    values: Vec<f64>,
    sectors: Option<SectorData>,
    closed: bool,
}

impl ConeProfile {
    pub fn sampled(grid: Arc<SphereGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidProfile(format!("{} values for a grid of {} nodes", values.len(), grid.len())));
        }
        check_values(&values)?;
        Ok(ConeProfile { grid, values, sectors: None, closed: false })
    }

    pub fn from_fn(grid: Arc<SphereGrid>, f: impl Fn(&Spatial) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(f).collect();
        Self::sampled(grid, values)
    }

    pub fn constant(grid: Arc<SphereGrid>, c: f64) -> Result<Self> {
        let values = vec![c; grid.len()];
        Self::sampled(grid, values)
    }

    /// Step profile on a circle grid; node values are read off the steps.
    pub fn sectors(grid: Arc<SphereGrid>, data: SectorData) -> Result<Self> {
        let angles = grid.angles().ok_or(Error::InvalidProfile("sector profiles need n = 2".into()))?;
        let values = angles.iter().map(|a| data.eval_angle(*a)).collect();
        Ok(ConeProfile { grid, values, sectors: Some(data), closed: false })
    }

    pub fn with_closed(mut self, closed: bool) -> Self {
        self.closed = closed;
        self
    }

    /// Same grid, new nodal values; sector data is dropped.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Ok(Self::sampled(self.grid.clone(), values)?.with_closed(self.closed))
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn dim(&self) -> Dim {
        self.grid.dim()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> ProfileKind {
        if self.sectors.is_some() {
            ProfileKind::PiecewiseSector
        } else {
            ProfileKind::SampledSmooth
        }
    }

    pub fn sector_data(&self) -> Option<&SectorData> {
        self.sectors.as_ref()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn max_value(&self) -> f64 {
        let mut m = self.values.iter().cloned().fold(f64::MIN, f64::max);
        if let Some(s) = &self.sectors {
            m = s.boundary_values().map(|(_, v)| v).fold(m, f64::max);
        }
        m
    }

    pub fn min_value(&self) -> f64 {
        let mut m = self.values.iter().cloned().fold(f64::MAX, f64::min);
        if let Some(s) = &self.sectors {
            m = s.boundary_values().map(|(_, v)| v).fold(m, f64::min);
        }
        m
    }

    /// Value in an arbitrary direction: interpolated, or exact for steps.
    pub fn eval(&self, dir: &Spatial) -> f64 {
        match &self.sectors {
            Some(s) => s.eval_angle(dir[1].atan2(dir[0])),
            None => self.grid.interpolate(&self.values, dir),
        }
    }

    pub fn same_grid(&self, other: &ConeProfile) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }
}

/// Generalised perimeter: the integral of `f^{n-1}` over the sphere.
pub fn perimeter(p: &ConeProfile) -> f64 {
    if let Some(s) = &p.sectors {
        return s.integral();
    }
    let e = p.dim().n() as i32 - 1;
    p.grid.weights().iter().zip(&p.values).map(|(w, f)| w * f.powi(e)).sum()
}

/// Upper semicontinuous envelope. A sampled profile stands for a continuous
/// interpolant and is its own envelope; steps take the largest one-sided value.
pub fn upper_envelope(p: &ConeProfile) -> ConeProfile {
    map_sectors(p, |a, b, c| a.max(b).max(c))
}

/// Lower semicontinuous envelope, see [`upper_envelope`].
pub fn lower_envelope(p: &ConeProfile) -> ConeProfile {
    map_sectors(p, |a, b, c| a.min(b).min(c))
}

fn map_sectors(p: &ConeProfile, pick: impl Fn(f64, f64, f64) -> f64) -> ConeProfile {
    match &p.sectors {
        None => p.clone(),
        Some(s) => ConeProfile::sectors(p.grid.clone(), s.with_points(pick))
            .expect("envelope of a valid step profile")
            .with_closed(p.closed),
    }
}

pub fn is_plump(p: &ConeProfile) -> bool {
    let twice = if p.closed { upper_envelope(&lower_envelope(p)) } else { lower_envelope(&upper_envelope(p)) };
    let same_nodes = twice.values.iter().zip(&p.values).all(|(a, b)| (a - b).abs() <= 1e-12);
    let same_points = match (&twice.sectors, &p.sectors) {
        (Some(a), Some(b)) => a.points.iter().zip(&b.points).all(|(x, y)| (x - y).abs() <= 1e-12),
        _ => true,
    };
    same_nodes && same_points
}
