//! Points, regions, strings, worldsheets, hyperplanes, sphere samples and
//! the antipodality predicates.

mod antipodal;
pub mod csv_io;
mod hyperplane;
mod point;
mod region;
mod sphere;
mod string;
mod worldsheet;

pub use antipodal::{
    antipodal_disjoint, antipodal_separable, antipodal_symmdiff, interior, AntipodalityMode,
    Separation, PLANE_TOL,
};
pub use hyperplane::Hyperplane;
pub use point::{CellKey, Point};
pub use region::{Region, DEFAULT_RESOLUTION};
pub use sphere::{
    antipode_map, sphere_sample, spherical_cap, SphericalRegion, SPHERE_RESOLUTION, SPHERE_TOL,
};
pub use string::{point_segment_distance, StringPath};
pub use worldsheet::{cover_check, Worldsheet};
