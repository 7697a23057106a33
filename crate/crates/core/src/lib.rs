//! Pick-and-place regrasp planning with a vertical support pin.
//!
//! The pipeline runs from a triangle mesh to a regrasp sequence:
//!
//! 1. [`geometry`]: load the mesh, compute its convex hull, mass properties
//!    and a grid of candidate pin contact points on its flat faces.
//! 2. [`placement`]: enumerate planar placements (resting on a hull face)
//!    and pin placements (a hull edge on the floor, the pin tip touching the
//!    object).
//! 3. [`grasp`]: sample parallel-jaw grasps on opposing flat faces and keep,
//!    per placement, those that clear the floor and the pin.
//! 4. [`graph`]: connect placements that share grasps and search for the
//!    shortest feasible regrasp sequence.
//! 5. [`bench`]: randomized reorientation trials over a workspace grid.

pub mod bench;
pub mod error;
pub mod geometry;
pub mod grasp;
pub mod graph;
pub mod pipeline;
pub mod placement;
pub mod shapes;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;

/// Version stamped into every serialized document.
pub const SCHEMA_VERSION: u32 = 1;
