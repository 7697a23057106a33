//! One-call helpers chaining placements, grasps and the regrasp graph.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::Mesh;
use crate::grasp::{associate_grasps, GraspFilter, GraspSet, GripperModel, PlacementGrasps, TorqueLimit};
use crate::graph::{PlanMode, RegraspGraph};
use crate::placement::{compute_placements, PlacementKind, PlacementParams, PlacementSet};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineParams {
    pub placement: PlacementParams,
    pub gripper: GripperModel,
    pub density: usize,
    /// Friction coefficient for the grasp force-closure test.
    pub grasp_mu: f64,
    pub torque: Option<TorqueLimit>,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            placement: PlacementParams::default(),
            gripper: GripperModel::default(),
            density: 8,
            grasp_mu: 0.5,
            torque: None,
        }
    }
}

/// Placements, grasps and the per-placement grasp subsets of one object.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedObject {
    pub placements: PlacementSet,
    pub grasps: GraspSet,
    /// In combined placement order.
    pub assoc: Vec<PlacementGrasps>,
}

impl PreparedObject {
    /// Assembles the pieces, filtering grasps per placement.
    pub fn from_parts(placements: PlacementSet, grasps: GraspSet, params: &PipelineParams) -> PreparedObject {
        let mut filter = GraspFilter::new(params.gripper, placements.center_of_mass);
        filter.torque = params.torque;
        let assoc = associate_grasps(&grasps.grasps, &placements.all(), &filter);
        PreparedObject { placements, grasps, assoc }
    }

    /// Regrasp graph over the placements the mode allows.
    pub fn graph(&self, mode: PlanMode) -> RegraspGraph {
        let count = if mode.uses_pin() { self.placements.len() } else { self.placements.planar.len() };
        RegraspGraph::build(&self.assoc[..count])
    }

    /// Short node labels for DOT output.
    pub fn labels(&self) -> Vec<String> {
        self.placements
            .all()
            .iter()
            .enumerate()
            .map(|(i, p)| match p.kind() {
                PlacementKind::Planar => format!("planar {i}"),
                PlacementKind::Pin => format!("pin {i}"),
            })
            .collect()
    }
}

pub fn compute_grasps(mesh: &Mesh, params: &PipelineParams) -> Result<GraspSet> {
    GraspSet::compute(mesh, &params.gripper, params.density, params.grasp_mu)
}

pub fn prepare(mesh: &Mesh, params: &PipelineParams) -> Result<PreparedObject> {
    let placements = compute_placements(mesh, &params.placement)?;
    let grasps = compute_grasps(mesh, params)?;
    Ok(PreparedObject::from_parts(placements, grasps, params))
}

/// Serialized regrasp graph with enough context to read it on its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub schema_version: u32,
    pub mesh_hash: String,
    pub mode: PlanMode,
    pub placement_kinds: Vec<PlacementKind>,
    pub graph: RegraspGraph,
}

impl GraphDocument {
    pub fn new(object: &PreparedObject, mode: PlanMode) -> GraphDocument {
        let graph = object.graph(mode);
        let kinds = object.placements.all().iter().take(graph.node_count()).map(|p| p.kind()).collect();
        GraphDocument {
            schema_version: SCHEMA_VERSION,
            mesh_hash: object.placements.provenance.mesh_hash.clone(),
            mode,
            placement_kinds: kinds,
            graph,
        }
    }
}
