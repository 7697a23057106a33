use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::search::{extract_grasp_sequence, shortest_placement_path, FailureKind, FeasibilityOracle, PlanResult, SearchLimits};
use super::RegraspGraph;
use crate::error::{Error, Result};
use crate::geometry::Pose;
use crate::grasp::{Grasp, PlacementGrasps};
use crate::placement::PlacementSet;

/// Largest angle between up vectors for a pose to match a placement.
pub const POSE_MATCH_ANGLE: f64 = 1e-3;
/// Largest height difference for a pose to match a placement, meters.
pub const POSE_MATCH_HEIGHT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanMode {
    /// Flat-surface placements only.
    #[serde(alias = "planar")]
    PlanarOnly,
    /// Flat-surface and pin placements.
    #[serde(alias = "pin")]
    PinPlanar,
}

impl PlanMode {
    pub fn uses_pin(self) -> bool {
        matches!(self, PlanMode::PinPlanar)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanQuery {
    pub init_pose: Pose,
    pub goal_pose: Pose,
    /// Pin base location; intermediate placements are put here too.
    pub pin_xy: [f64; 2],
    pub mode: PlanMode,
}

/// Index of the first planar placement whose resting orientation and height
/// agree with `pose` (the yaw and floor position are free).
pub fn match_planar_placement(placements: &PlacementSet, pose: &Pose) -> Result<usize> {
    let up = pose.rotation.inverse() * Vector3::z();
    placements
        .planar
        .iter()
        .position(|p| {
            let canonical_up = p.world_pose.rotation.inverse() * Vector3::z();
            canonical_up.angle(&up) <= POSE_MATCH_ANGLE
                && (p.world_pose.translation.z - pose.translation.z).abs() <= POSE_MATCH_HEIGHT
        })
        .ok_or(Error::NoMatchingPlacement)
}

/// Graph nodes: the start and goal placements first (as their own nodes,
/// even when they share a placement class), then every placement allowed by
/// the mode as an intermediate at the pin location.
pub(crate) struct TaskGraph {
    pub graph: RegraspGraph,
    pub poses: Vec<Pose>,
}

pub(crate) fn task_graph(
    placements: &PlacementSet,
    assoc: &[PlacementGrasps],
    init: (usize, Pose),
    goal: (usize, Pose),
    query: &PlanQuery,
) -> TaskGraph {
    let count = if query.mode.uses_pin() { placements.len() } else { placements.planar.len() };
    let mut nodes = vec![assoc[init.0].clone(), assoc[goal.0].clone()];
    let mut poses = vec![init.1, goal.1];
    for (i, a) in assoc.iter().enumerate().take(count) {
        nodes.push(a.clone());
        let placement = placements.get(i).expect("placement index in range");
        poses.push(placement.pose_at(query.pin_xy[0], query.pin_xy[1], 0.0));
    }
    TaskGraph { graph: RegraspGraph::build(&nodes), poses }
}

/// End-to-end regrasp plan between two flat-surface poses.
///
/// `assoc` holds the usable grasps of every placement in combined index
/// order (planar first, then pin).
pub fn plan_regrasp(
    placements: &PlacementSet,
    grasps: &[Grasp],
    assoc: &[PlacementGrasps],
    query: &PlanQuery,
    oracle: &dyn FeasibilityOracle,
    limits: &SearchLimits,
) -> Result<PlanResult> {
    if assoc.len() != placements.len() {
        return Err(Error::Config(format!(
            "grasp association covers {} placements, expected {}",
            assoc.len(),
            placements.len()
        )));
    }
    let init = match_planar_placement(placements, &query.init_pose)?;
    let goal = match_planar_placement(placements, &query.goal_pose)?;
    let task = task_graph(placements, assoc, (init, query.init_pose), (goal, query.goal_pose), query);
    let Some(path) = shortest_placement_path(&task.graph, 0, 1) else {
        return Ok(PlanResult::infeasible(FailureKind::GraphDisconnected, 0));
    };
    Ok(extract_grasp_sequence(&task.graph, &path, &task.poses, grasps, oracle, limits))
}
