//! Achronal graphs: spacelike hypersurfaces given as graphs over a flat chart
//! or over the hyperboloid, with their area bounds.

mod checks;
mod flat;
mod hyperbolic;
mod io;

pub use checks::{
    check_cone_graph, check_hyperboloid_graph, perimeter_area_bound, spanning_disk, AchronalCheck, HYP_CONTAINMENT_TOL,
};
pub use flat::{area_flat, null_extension, push_to_hyperboloid, FlatGraph, PushResult, LIPSCHITZ_TOL};
pub use hyperbolic::{
    area_hyperbolic, check_infinity_perimeter, f_infinity, to_hyperbolic_chart, HyperbolicArea, HyperbolicGraph,
    InfinityCheck,
};
pub use io::{
    flat_graph_to_string, hyperbolic_graph_to_string, parse_flat_graph, parse_hyperbolic_graph, read_flat_graph,
    read_hyperbolic_graph,
};
