//! Descriptive, strong and descriptive-strong proximity relations on finite
//! regions, with a randomised axiom checker.

mod axioms;
mod relations;

pub use axioms::{
    check_axioms, check_proposition1, lattice_universe, random_region, spc_check, AxiomOutcome,
    AxiomReport, ContinuityMode, BOX_HALF_WIDTH, MAX_FAMILY, MAX_REGION_POINTS,
};
pub use relations::{
    descriptive_intersection, descriptively_strongly_near, near_descriptive, strongly_near,
    strongly_near_in, ProximityConfig,
};
