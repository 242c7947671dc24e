//! Sets on the unit hyperboloid, their domains of dependence and the
//! restricted polarisation.

mod dod;
mod io;
mod set;

pub use dod::{
    causal_bounds, default_hyp_resolution, hyp_dod_volume, hyp_isoperimetric_check, HypDodResolution,
    HypIsoperimetricCheck,
};
pub use io::{grid_to_string, parse_balls, parse_grid, read_hyperbolic_set};
pub use set::{
    ball_diamond_volume, ball_radius_for_volume, exponential_volume_bound, hyp_ball_perimeter, hyp_ball_volume,
    hyp_distance, hyp_perimeter, hyp_point, hyp_polarize, hyp_volume, lift, polar_coordinates, GeodesicBall,
    HyperbolicGrid, HyperbolicSet, ON_HYPERBOLOID_TOL,
};
