//! Mesh ingestion, convex hull, mass properties, surface sampling and the
//! geometric predicates shared by the planners.

pub mod hull;
pub mod io;
pub mod mass;
pub mod mesh;
pub mod pose;
pub mod predicates;
pub mod regions;
pub mod sampling;

pub use hull::{convex_hull, ConvexHull, HullEdge, HullFace};
pub use io::{load_mesh, load_mesh_file, MeshFormat};
pub use mass::{mass_properties, MassProperties};
pub use mesh::Mesh;
pub use pose::Pose;
pub use predicates::{point_in_triangle_projection, segment_intersects_mesh, OrientedBox};
pub use regions::{flat_regions, FlatRegion};
pub use sampling::{sample_surface, SurfaceSample, DEFAULT_SAMPLE_MARGIN, DEFAULT_SAMPLE_STEP};
