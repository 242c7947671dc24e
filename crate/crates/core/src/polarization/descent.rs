//! Random polarisation sequences driving a profile towards a cap.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::conformal::ConformalReflection;
use super::profile_ops::polarize_profile;
use crate::error::Result;
use crate::geometry::{Dim, SpacetimeVector};
use crate::lightcone::{
    cap_profile, cap_volume_oracle, dod_symdiff, dod_volume, matched_cap_height, perimeter, ConeProfile,
};
use crate::random::{random_reflection_plane, seeded};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EarlyStop {
    /// Stop once the relative volume gain over `window` iterations drops below this.
    pub min_relative_gain: f64,
    pub window: usize,
}

impl Default for EarlyStop {
    fn default() -> Self {
        EarlyStop { min_relative_gain: 1e-6, window: 50 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentSchedule {
    pub iterations: usize,
    pub seed: u64,
    /// Rapidities are drawn uniformly from `[-alpha_max, alpha_max]`.
    pub alpha_max: f64,
    pub radial_nodes: usize,
    pub early_stop: Option<EarlyStop>,
}

impl DescentSchedule {
    pub fn new(iterations: usize, seed: u64, radial_nodes: usize) -> Self {
        DescentSchedule { iterations, seed, alpha_max: 0.5, radial_nodes, early_stop: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DescentRecord {
    pub iter: usize,
    /// Mirror normal used at this step; zero for the initial record.
    pub normal: SpacetimeVector,
    pub perimeter: f64,
    pub volume: f64,
    /// Volume of the symmetric difference with the cap of matched perimeter.
    pub gap_to_cap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DescentTrace {
    pub dim: Dim,
    pub seed: u64,
    pub cap_height: f64,
    pub cap_volume: f64,
    pub stopped_early: bool,
    pub records: Vec<DescentRecord>,
}

impl DescentTrace {
    pub fn final_volume(&self) -> f64 {
        self.records.last().map(|r| r.volume).unwrap_or(0.0)
    }

    /// Largest drop of the volume below its running maximum.
    pub fn max_volume_drop(&self) -> f64 {
        let mut best = f64::NEG_INFINITY;
        let mut drop: f64 = 0.0;
        for r in &self.records {
            best = best.max(r.volume);
            drop = drop.max(best - r.volume);
        }
        drop
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("iter,w_t,w_x1,w_x2");
        if self.dim == Dim::Three {
            s.push_str(",w_x3");
        }
        s.push_str(",perimeter,volume,gap_to_cap\n");
        for r in &self.records {
            let _ = write!(s, "{},{:.12e},{:.12e},{:.12e}", r.iter, r.normal.t, r.normal.x[0], r.normal.x[1]);
            if self.dim == Dim::Three {
                let _ = write!(s, ",{:.12e}", r.normal.x[2]);
            }
            let _ = writeln!(s, ",{:.12e},{:.12e},{:.12e}", r.perimeter, r.volume, r.gap_to_cap);
        }
        s
    }
}

/// Applies `schedule.iterations` polarisations about random mirrors with the
/// rest frame `e0` as polariser. Volume never decreases along the way (up to
/// discretisation) and the profile approaches a cap.
pub fn polarization_descent(p: &ConeProfile, schedule: &DescentSchedule) -> Result<(ConeProfile, DescentTrace)> {
    let dim = p.dim();
    let grid: Arc<_> = p.grid().clone();
    let cap_height = matched_cap_height(p);
    let cap = cap_profile(&SpacetimeVector::time_unit(), cap_height, grid.clone())?;
    let record = |iter: usize, normal: SpacetimeVector, q: &ConeProfile| -> Result<DescentRecord> {
        Ok(DescentRecord {
            iter,
            normal,
            perimeter: perimeter(q),
            volume: dod_volume(q, schedule.radial_nodes)?,
            gap_to_cap: dod_symdiff(q, &cap, schedule.radial_nodes)?,
        })
    };
    let mut rng = seeded(schedule.seed);
    let mut current = p.clone();
    let mut records = vec![record(0, SpacetimeVector::ORIGIN, &current)?];
    let mut stopped_early = false;
    for iter in 1..=schedule.iterations {
        let plane = random_reflection_plane(dim, &mut rng, schedule.alpha_max)?;
        let cr = ConformalReflection::new(&plane, grid.clone());
        current = polarize_profile(&current, &cr)?;
        records.push(record(iter, *plane.normal(), &current)?);
        if let Some(stop) = schedule.early_stop {
            if iter >= stop.window {
                let old = records[iter - stop.window].volume;
                if (records[iter].volume - old) < stop.min_relative_gain * old {
                    stopped_early = true;
                    break;
                }
            }
        }
    }
    let trace = DescentTrace {
        dim,
        seed: schedule.seed,
        cap_height,
        cap_volume: cap_volume_oracle(dim, cap_height),
        stopped_early,
        records,
    };
    Ok((current, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SphereGrid;

    #[test]
    fn short_descent_is_deterministic_and_monotone() {
        let g = Arc::new(SphereGrid::circle(128));
        let p = ConeProfile::from_fn(g, |d| 1.0 + 0.3 * (2.0 * d[1].atan2(d[0])).cos()).unwrap();
        let s = DescentSchedule::new(10, 42, 128);
        let (a, ta) = polarization_descent(&p, &s).unwrap();
        let (b, _) = polarization_descent(&p, &s).unwrap();
        assert_eq!(a.values(), b.values());
        assert_eq!(ta.records.len(), 11);
        assert!(ta.max_volume_drop() < 1e-3 * ta.final_volume());
        assert!(ta.to_csv().starts_with("iter,w_t,w_x1,w_x2,perimeter"));
    }
}
