use serde::{Deserialize, Serialize};

/// Numeric tolerances shared by every geometric routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Predicate tolerance in meters.
    pub geom: f64,
    /// Vertex weld distance used when loading meshes.
    pub weld: f64,
    /// Coplanar merge threshold for hull faces, radians.
    pub hull_merge_angle: f64,
    /// Coplanar threshold for grouping mesh triangles into flat regions, radians.
    pub region_angle: f64,
    /// Minimum barycentric coordinate for a center-of-mass projection to count as supported.
    pub stability_margin: f64,
    /// Two placements closer than this (object-frame support data) are the same placement.
    pub pose_dedup: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            geom: 1e-9,
            weld: 1e-6,
            hull_merge_angle: 1e-6,
            region_angle: 1e-3,
            stability_margin: 0.01,
            pose_dedup: 1e-6,
        }
    }
}
