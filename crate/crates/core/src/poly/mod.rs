//! Convex polyhedra in H-, V- and P-representation and the polyhedral
//! calculus on top of them.

mod compare;
mod convert;
pub(crate) mod dd;
mod faces;
mod hrep;
mod prep;
mod project;
mod vrep;

pub use compare::{equal, equal_to_projection, projections_equal, vrep_within_hrep, vrep_within_prep};
pub use convert::{hrep_to_vrep, vrep_to_hrep};
pub use faces::{minimal_faces, FaceRep};
pub use hrep::HRepPolyhedron;
pub use prep::PRepPolyhedron;
pub use project::{
    project, Projection, ProjectionOptions, ProjectionStrategy, FM_AUX_LIMIT, LP_HULL_MAX_DIM,
};
pub use vrep::VRepPolyhedron;

/// Tolerance for deduplicating vertices.
pub const DEDUP_TOL: f64 = 1e-7;

/// Irredundant H-representation of `conv(points) + cone(rays) + span(lines)`.
pub fn convert(v: &VRepPolyhedron) -> HRepPolyhedron {
    vrep_to_hrep(v)
}
