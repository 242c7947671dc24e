//! Polarisation of spacetime regions stored as cell occupancy on a box.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ReflectionPlane, Side, SpacetimeVector};
use crate::lightcone::{ArrivalField, ConeProfile};

/// Occupancy grid on an axis-aligned box in `R^{1,n}`. Axis 0 is time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicatorRegion {
    axes: usize,
    lo: [f64; 4],
    hi: [f64; 4],
    cells: [usize; 4],
    occupied: Vec<bool>,
}

impl IndicatorRegion {
    /// Empty region; `lo`, `hi`, `cells` have one entry per axis (n + 1 of them).
    pub fn empty(lo: &[f64], hi: &[f64], cells: &[usize]) -> Result<Self> {
        let axes = lo.len();
        if !(3..=4).contains(&axes) || hi.len() != axes || cells.len() != axes {
            return Err(Error::UnsupportedDimension(axes.saturating_sub(1)));
        }
        let mut l = [0.0; 4];
        let mut h = [1.0; 4];
        let mut c = [1usize; 4];
        for k in 0..axes {
            if !(hi[k] > lo[k]) || cells[k] == 0 {
                return Err(Error::InvalidProfile(format!("degenerate box along axis {k}")));
            }
            l[k] = lo[k];
            h[k] = hi[k];
            c[k] = cells[k];
        }
        let total = c.iter().product();
        Ok(IndicatorRegion { axes, lo: l, hi: h, cells: c, occupied: vec![false; total] })
    }

    pub fn from_fn(lo: &[f64], hi: &[f64], cells: &[usize], inside: impl Fn(&SpacetimeVector) -> bool) -> Result<Self> {
        let mut r = Self::empty(lo, hi, cells)?;
        for i in 0..r.occupied.len() {
            r.occupied[i] = inside(&r.center(i));
        }
        Ok(r)
    }

    pub fn len(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }

    pub fn occupied(&self) -> &[bool] {
        &self.occupied
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / self.cells[axis] as f64
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.axes).map(|k| self.spacing(k)).product()
    }

    pub fn count(&self) -> usize {
        self.occupied.iter().filter(|b| **b).count()
    }

    pub fn volume(&self) -> f64 {
        self.count() as f64 * self.cell_volume()
    }

    fn multi(&self, mut i: usize) -> [usize; 4] {
        let mut m = [0; 4];
        for k in (0..4).rev() {
            m[k] = i % self.cells[k];
            i /= self.cells[k];
        }
        m
    }

    fn flat(&self, m: &[usize; 4]) -> usize {
        let mut i = 0;
        for k in 0..4 {
            i = i * self.cells[k] + m[k];
        }
        i
    }

    pub fn center(&self, i: usize) -> SpacetimeVector {
        let m = self.multi(i);
        let c = |k: usize| self.lo[k] + (m[k] as f64 + 0.5) * self.spacing(k);
        SpacetimeVector::new(c(0), [c(1), c(2), if self.axes == 4 { c(3) } else { 0.0 }])
    }

    /// Cell containing `p`, if inside the box.
    pub fn cell_of(&self, p: &SpacetimeVector) -> Option<usize> {
        let coords = [p.t, p.x[0], p.x[1], p.x[2]];
        let mut m = [0usize; 4];
        for k in 0..self.axes {
            let s = (coords[k] - self.lo[k]) / self.spacing(k);
            if !(s >= 0.0 && s < self.cells[k] as f64) {
                return None;
            }
            m[k] = s as usize;
        }
        Some(self.flat(&m))
    }

    fn same_lattice(&self, other: &Self) -> bool {
        self.axes == other.axes && self.lo == other.lo && self.hi == other.hi && self.cells == other.cells
    }

    pub fn symdiff_count(&self, other: &Self) -> Result<usize> {
        if !self.same_lattice(other) {
            return Err(Error::GridMismatch);
        }
        Ok(self.occupied.iter().zip(&other.occupied).filter(|(a, b)| a != b).count())
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        if !self.same_lattice(other) {
            return Err(Error::GridMismatch);
        }
        let mut r = self.clone();
        r.occupied.iter_mut().zip(&other.occupied).for_each(|(a, b)| *a = *a && *b);
        Ok(r)
    }

    fn for_each_neighbor(&self, i: usize, diagonal: bool, mut f: impl FnMut(Option<usize>)) {
        let m = self.multi(i);
        let range: &[isize] = &[-1, 0, 1];
        let mut offs = [0isize; 4];
        let count = 3usize.pow(self.axes as u32);
        for code in 0..count {
            let mut c = code;
            let mut nonzero = 0;
            for k in 0..self.axes {
                offs[k] = range[c % 3];
                c /= 3;
                if offs[k] != 0 {
                    nonzero += 1;
                }
            }
            if nonzero == 0 || (!diagonal && nonzero > 1) {
                continue;
            }
            let mut n = m;
            let mut inside = true;
            for k in 0..self.axes {
                let v = m[k] as isize + offs[k];
                if v < 0 || v >= self.cells[k] as isize {
                    inside = false;
                    break;
                }
                n[k] = v as usize;
            }
            f(if inside { Some(self.flat(&n)) } else { None });
        }
    }

    /// Occupied cells with an empty (or out-of-box) face neighbour.
    pub fn boundary_count(&self) -> usize {
        (0..self.len())
            .filter(|&i| {
                if !self.occupied[i] {
                    return false;
                }
                let mut edge = false;
                self.for_each_neighbor(i, false, |n| {
                    if !n.map(|j| self.occupied[j]).unwrap_or(false) {
                        edge = true;
                    }
                });
                edge
            })
            .count()
    }

    /// Region grown by one cell in every direction, diagonals included.
    pub fn dilate(&self) -> Self {
        let mut r = self.clone();
        for i in 0..self.len() {
            if self.occupied[i] {
                continue;
            }
            let mut hit = false;
            self.for_each_neighbor(i, true, |n| {
                if let Some(j) = n {
                    hit |= self.occupied[j];
                }
            });
            r.occupied[i] = hit;
        }
        r
    }

    /// Cells of `self` that are not within one cell of `other`.
    pub fn excess_over(&self, other: &Self) -> Result<usize> {
        if !self.same_lattice(other) {
            return Err(Error::GridMismatch);
        }
        let grown = other.dilate();
        Ok(self.occupied.iter().zip(&grown.occupied).filter(|(a, b)| **a && !**b).count())
    }
}

/// Polarisation of a region. A cell centre on the plus side is occupied if it
/// or its mirror image is; on the minus side, if both are. Images are looked
/// up in the cell containing them.
pub fn polarize_indicator(s: &IndicatorRegion, plane: &ReflectionPlane) -> Result<IndicatorRegion> {
    let mut image = vec![None; s.len()];
    for (i, slot) in image.iter_mut().enumerate() {
        *slot = s.cell_of(&plane.reflect(&s.center(i)));
        if s.occupied[i] && slot.is_none() {
            return Err(Error::ReflectionOutOfBox);
        }
    }
    let mut out = s.clone();
    for i in 0..s.len() {
        let here = s.occupied[i];
        let there = image[i].map(|j| s.occupied[j]).unwrap_or(false);
        out.occupied[i] = match plane.side_of(&s.center(i)) {
            Side::Plus => here || there,
            Side::Minus => here && there,
            Side::On => here,
        };
    }
    Ok(out)
}

/// Rasterises `D(C_f) = { |x| <= t < u(x), |x| < f(x/|x|) }` (n = 2 boxes only).
pub fn rasterize_dod(p: &ConeProfile, lo: &[f64], hi: &[f64], cells: &[usize]) -> Result<IndicatorRegion> {
    let field = ArrivalField::new(p);
    let mut r = IndicatorRegion::empty(lo, hi, cells)?;
    let per_column = r.cells[0];
    let columns = r.len() / per_column;
    let stride: usize = r.cells[1..].iter().product();
    for col in 0..columns {
        let c = r.center(col);
        let radius = crate::geometry::vector::norm(&c.x);
        // The grid minimum sits slightly above |x| outside the footprint of
        // the cone, so that region is cut away explicitly.
        if radius > 0.0 && radius >= p.eval(&crate::geometry::vector::scale(&c.x, 1.0 / radius)) {
            continue;
        }
        let u = field.eval(&c.x);
        for k in 0..per_column {
            let i = k * stride + col;
            let t = r.center(i).t;
            r.occupied[i] = radius <= t && t < u;
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TimelikeHyperplane;

    fn blob(center: [f64; 3], radius: f64) -> impl Fn(&SpacetimeVector) -> bool {
        move |p| {
            let d = [p.t - center[0], p.x[0] - center[1], p.x[1] - center[2]];
            d.iter().map(|v| v * v).sum::<f64>() < radius * radius
        }
    }

    #[test]
    fn lattice_preserving_mirror_is_exact() {
        let lo = [-1.0, -1.0, -1.0];
        let hi = [1.0, 1.0, 1.0];
        let s = IndicatorRegion::from_fn(&lo, &hi, &[32, 32, 32], blob([0.1, 0.3, -0.2], 0.4)).unwrap();
        let h = TimelikeHyperplane::from_normal(SpacetimeVector::spatial_unit(1)).unwrap();
        let plane = ReflectionPlane::new(h, SpacetimeVector::new(1.0, [-0.5, 0.0, 0.0])).unwrap();
        let p = polarize_indicator(&s, &plane).unwrap();
        assert_eq!(p.count(), s.count());
        let back = polarize_indicator(&p, &plane).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn out_of_box_reflection_is_an_error() {
        let lo = [-1.0, -1.0, -1.0];
        let hi = [1.0, 1.0, 1.0];
        let s = IndicatorRegion::from_fn(&lo, &hi, &[16, 16, 16], blob([0.0, 0.8, 0.0], 0.15)).unwrap();
        let h = TimelikeHyperplane::from_normal(SpacetimeVector::new(0.0, [1.0, 0.0, 0.0])).unwrap();
        let shifted = TimelikeHyperplane::from_rapidity(1.2, [1.0, 0.0, 0.0]).unwrap();
        let plane = ReflectionPlane::new(shifted, SpacetimeVector::time_unit()).unwrap();
        assert!(matches!(polarize_indicator(&s, &plane), Err(Error::ReflectionOutOfBox)));
        let ok = ReflectionPlane::new(h, SpacetimeVector::new(1.0, [0.3, 0.0, 0.0])).unwrap();
        assert!(polarize_indicator(&s, &ok).is_ok());
    }

    #[test]
    fn unit_cone_raster_volume() {
        use crate::geometry::SphereGrid;
        use std::sync::Arc;
        let g = Arc::new(SphereGrid::circle(256));
        let p = ConeProfile::constant(g, 1.0).unwrap();
        let r = rasterize_dod(&p, &[0.0, -1.0, -1.0], &[2.0, 1.0, 1.0], &[100, 100, 100]).unwrap();
        let exact = 2.0 * std::f64::consts::PI / 3.0;
        assert!((r.volume() - exact).abs() / exact < 2e-2);
    }
}
