use nalgebra::{Point3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Grasp, GripperModel};
use crate::placement::Placement;

const GRAVITY: f64 = 9.81;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorqueLimit {
    /// N·m
    pub max_torque: f64,
    /// kg
    pub mass: f64,
}

/// Per-placement filter settings. The floor is always present.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraspFilter {
    pub gripper: GripperModel,
    pub torque: Option<TorqueLimit>,
    pub center_of_mass: Point3<f64>,
    /// Floor penetration allowed before a box counts as colliding.
    pub floor_eps: f64,
}

impl GraspFilter {
    pub fn new(gripper: GripperModel, center_of_mass: Point3<f64>) -> Self {
        GraspFilter { gripper, torque: None, center_of_mass, floor_eps: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlacementGrasps {
    pub placement_index: usize,
    /// Ascending grasp ids.
    pub grasp_ids: Vec<usize>,
}

fn grasp_ok(grasp: &Grasp, placement: &Placement, filter: &GraspFilter) -> bool {
    let pose = placement.world_pose();
    let boxes = filter.gripper.boxes(grasp);
    for b in &boxes {
        let low = b.corners().iter().map(|c| pose.transform_point(c).z).fold(f64::INFINITY, f64::min);
        if low < -filter.floor_eps {
            return false;
        }
    }
    if let Some((base, tip)) = placement.pin_segment() {
        if boxes.iter().any(|b| b.intersects_segment(&base, &tip)) {
            return false;
        }
    }
    if let Some(limit) = filter.torque {
        let arm = pose.transform_vector(&(filter.center_of_mass - grasp.center));
        let weight = Vector3::new(0.0, 0.0, -limit.mass * GRAVITY);
        if arm.cross(&weight).norm() > limit.max_torque {
            return false;
        }
    }
    true
}

/// The subset of `total` usable in a placement: no gripper box below the
/// floor, none touching the pin, and optionally within the torque limit.
pub fn grasps_for_placement(
    total: &[Grasp],
    placement_index: usize,
    placement: &Placement,
    filter: &GraspFilter,
) -> PlacementGrasps {
    let mut grasp_ids: Vec<usize> = total
        .iter()
        .filter(|g| grasp_ok(g, placement, filter))
        .map(|g| g.id)
        .collect();
    grasp_ids.sort_unstable();
    PlacementGrasps { placement_index, grasp_ids }
}

/// Filters every placement, in placement order.
pub fn associate_grasps(total: &[Grasp], placements: &[Placement], filter: &GraspFilter) -> Vec<PlacementGrasps> {
    placements
        .par_iter()
        .enumerate()
        .map(|(i, p)| grasps_for_placement(total, i, p, filter))
        .collect()
}
