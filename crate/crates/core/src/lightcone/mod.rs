//! Finite lightcone profiles and their domains of dependence.

pub mod arrival;
pub mod cap;
pub mod io;
pub mod measures;
pub mod profile;

pub use arrival::{arrival, default_radial_nodes, dod_symdiff, dod_volume, dod_volume_on, ArrivalField, Ray};
pub use cap::{cap_profile, cap_volume_oracle, future_section, matched_cap_height};
pub use measures::{
    euclid_check, euclidean_lateral_area, isoperimetric_check, isoperimetric_ratio, minkowski_lateral_area,
    EuclidCheck, IsoperimetricCheck,
};
pub use profile::{is_plump, lower_envelope, perimeter, upper_envelope, ConeProfile, ProfileKind, SectorData};
