//! Stable placements on the floor plane, with and without a vertical pin.
//!
//! A planar placement rests on one convex-hull face. A pin placement rests on
//! one convex-hull edge and leans on the tip of a vertical pin of length `l`
//! touching the surface at a sampled point `x`; the pin base `b` lies on the
//! floor directly below `x`.

mod pin;
mod planar;
mod set;
mod stability;

pub use pin::{
    check_friction, enumerate_pin_placements, pin_candidates, pin_placement_pose,
    pin_within_friction_cone, select_highest_per_edge, solve_pin_base, PinParams, HEIGHT_TIE,
};
pub use planar::enumerate_planar_placements;
pub use set::{compute_placements, PlacementParams, PlacementSet, Provenance};
pub use stability::{check_stability, com_in_polygon};

use nalgebra::{Point3, Vector3};
use serde::{Deserialize, Serialize};

use crate::geometry::{Pose, SurfaceSample};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinPlacement {
    /// Pin contact point `x` on the object surface.
    pub touch_point: SurfaceSample,
    /// Index of the sample in the sample list the placement came from.
    pub sample_index: usize,
    /// Index into the hull edge list.
    pub hull_edge: usize,
    /// Endpoints `e1`, `e2` of the supporting hull edge (object frame).
    pub edge: [Point3<f64>; 2],
    /// Pin base `b` in the object frame.
    pub pin_base: Point3<f64>,
    pub pin_length: f64,
    /// Object-to-world transform with the pin base at `pin_base_world`.
    pub world_pose: Pose,
    pub com_height: f64,
}

impl PinPlacement {
    /// Unit vector from the pin base to the contact point; world up in the
    /// object frame.
    pub fn pin_axis(&self) -> Vector3<f64> {
        (self.touch_point.point - self.pin_base).normalize()
    }

    /// Residuals of `|x−b| = l`, `(x−b)·(e1−b) = 0`, `(x−b)·(e2−b) = 0`.
    pub fn residuals(&self) -> [f64; 3] {
        base_residuals(&self.touch_point.point, &self.edge[0], &self.edge[1], &self.pin_base, self.pin_length)
    }

    /// World pose with the pin base moved to `(x, y)` and the object turned
    /// by `yaw` about the pin.
    pub fn pose_at(&self, x: f64, y: f64, yaw: f64) -> Pose {
        let base = self.world_pose.transform_point(&self.pin_base);
        let to_origin = Pose::new(nalgebra::Rotation3::identity(), -base.coords);
        Pose::planar(x, y, yaw).then_after(&to_origin.then_after(&self.world_pose))
    }
}

pub(crate) fn base_residuals(
    x: &Point3<f64>,
    e1: &Point3<f64>,
    e2: &Point3<f64>,
    b: &Point3<f64>,
    l: f64,
) -> [f64; 3] {
    [
        (x - b).norm() - l,
        (x - b).dot(&(e1 - b)),
        (x - b).dot(&(e2 - b)),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarPlacement {
    /// Index into the hull face list.
    pub support_face: usize,
    /// Outward normal of the support face (object frame).
    pub face_normal: Vector3<f64>,
    /// Support polygon, counter-clockwise seen from outside (object frame).
    pub support_polygon: Vec<Point3<f64>>,
    /// Object-to-world transform: face on z = 0, COM above the origin.
    pub world_pose: Pose,
    pub com_height: f64,
}

impl PlanarPlacement {
    pub fn pose_at(&self, x: f64, y: f64, yaw: f64) -> Pose {
        Pose::planar(x, y, yaw).then_after(&self.world_pose)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementKind {
    Planar,
    Pin,
}

/// Either kind of placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Placement {
    Planar(PlanarPlacement),
    Pin(PinPlacement),
}

impl Placement {
    pub fn kind(&self) -> PlacementKind {
        match self {
            Placement::Planar(_) => PlacementKind::Planar,
            Placement::Pin(_) => PlacementKind::Pin,
        }
    }

    pub fn world_pose(&self) -> &Pose {
        match self {
            Placement::Planar(p) => &p.world_pose,
            Placement::Pin(p) => &p.world_pose,
        }
    }

    pub fn com_height(&self) -> f64 {
        match self {
            Placement::Planar(p) => p.com_height,
            Placement::Pin(p) => p.com_height,
        }
    }

    /// Pin segment (base, tip) in the object frame, if any.
    pub fn pin_segment(&self) -> Option<(Point3<f64>, Point3<f64>)> {
        match self {
            Placement::Pin(p) => Some((p.pin_base, p.touch_point.point)),
            Placement::Planar(_) => None,
        }
    }

    /// World pose at a location: the COM projection for planar placements,
    /// the pin base for pin placements.
    pub fn pose_at(&self, x: f64, y: f64, yaw: f64) -> Pose {
        match self {
            Placement::Planar(p) => p.pose_at(x, y, yaw),
            Placement::Pin(p) => p.pose_at(x, y, yaw),
        }
    }
}
