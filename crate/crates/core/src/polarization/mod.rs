//! Lorentz polarisation and symmetrisation of cone profiles and regions.

mod conformal;
mod descent;
mod equal_plane;
mod graph;
mod indicator;
mod profile_ops;
mod z2n;

pub use conformal::{conformal_factor, conformal_map, ConformalReflection};
pub use descent::{polarization_descent, DescentRecord, DescentSchedule, DescentTrace, EarlyStop};
pub use equal_plane::{equal_perimeter_plane, EqualPerimeterPlane, TimelikePlaneBasis};
pub use graph::polarize_graph;
pub use indicator::{polarize_indicator, rasterize_dod, IndicatorRegion};
pub use profile_ops::{polarize_profile, reflect_profile, symmetrize_profile, symmetrize_with, SymmetrizeSign};
pub use z2n::{z2n_symmetrize, Z2nSymmetrization};
