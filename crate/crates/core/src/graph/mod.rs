//! Two-layer regrasp graph and sequence search.
//!
//! Layer 1 nodes are placements, joined when their grasp sets intersect.
//! Layer 2 nodes are (placement, grasp) instances: a cross edge joins the
//! same grasp in two adjacent placements, and intra edges join every pair of
//! shared grasps within one placement.

mod plan;
mod search;

pub use plan::{match_planar_placement, plan_regrasp, PlanMode, PlanQuery, POSE_MATCH_ANGLE, POSE_MATCH_HEIGHT};
pub use search::{
    enumerate_paths, extract_grasp_sequence, extract_grasp_sequence_with, shortest_placement_path, FailureKind,
    FeasibilityOracle, PlanResult, SearchLimits, Transfer,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::grasp::PlacementGrasps;

pub type Instance = (usize, usize);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegraspGraph {
    /// Placement index of each node; nodes are numbered by position.
    pub layer1_nodes: Vec<usize>,
    /// Node pairs `(a, b)` with `a < b`, ascending.
    pub layer1_edges: Vec<(usize, usize)>,
    /// `(node, grasp id)` instances, ascending.
    pub layer2_nodes: Vec<Instance>,
    /// Instance pairs, each stored with the smaller instance first, ascending.
    pub layer2_edges: Vec<(Instance, Instance)>,
    /// Grasp ids per node, ascending.
    pub grasp_assoc: Vec<Vec<usize>>,
    #[serde(skip)]
    adjacency: Vec<Vec<usize>>,
}

fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl RegraspGraph {
    pub fn build(assoc: &[PlacementGrasps]) -> RegraspGraph {
        let n = assoc.len();
        let grasp_assoc: Vec<Vec<usize>> = assoc
            .iter()
            .map(|a| {
                let mut ids = a.grasp_ids.clone();
                ids.sort_unstable();
                ids.dedup();
                ids
            })
            .collect();
        let mut layer1_edges = Vec::new();
        let mut adjacency = vec![Vec::new(); n];
        let mut shared: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut layer2_edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let common = sorted_intersection(&grasp_assoc[a], &grasp_assoc[b]);
                if common.is_empty() {
                    continue;
                }
                layer1_edges.push((a, b));
                adjacency[a].push(b);
                adjacency[b].push(a);
                for &g in &common {
                    shared[a].insert(g);
                    shared[b].insert(g);
                    layer2_edges.push(((a, g), (b, g)));
                }
            }
        }
        for (node, gs) in shared.iter().enumerate() {
            let gs: Vec<usize> = gs.iter().copied().collect();
            for (k, &u) in gs.iter().enumerate() {
                for &v in &gs[k + 1..] {
                    layer2_edges.push(((node, u), (node, v)));
                }
            }
        }
        layer2_edges.sort_unstable();
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        let layer2_nodes = grasp_assoc
            .iter()
            .enumerate()
            .flat_map(|(node, gs)| gs.iter().map(move |&g| (node, g)))
            .collect();
        RegraspGraph {
            layer1_nodes: assoc.iter().map(|a| a.placement_index).collect(),
            layer1_edges,
            layer2_nodes,
            layer2_edges,
            grasp_assoc,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.layer1_nodes.len()
    }

    /// Layer-1 neighbours of a node, ascending.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    /// Grasps shared by two nodes, ascending.
    pub fn shared_grasps(&self, a: usize, b: usize) -> Vec<usize> {
        sorted_intersection(&self.grasp_assoc[a], &self.grasp_assoc[b])
    }

    /// Restores the adjacency lists after deserialization.
    pub fn rebuild_adjacency(&mut self) {
        let mut adjacency = vec![Vec::new(); self.layer1_nodes.len()];
        for &(a, b) in &self.layer1_edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        self.adjacency = adjacency;
    }

    /// Layer-2 neighbour lists keyed by instance.
    pub fn layer2_adjacency(&self) -> BTreeMap<Instance, Vec<Instance>> {
        let mut out: BTreeMap<Instance, Vec<Instance>> = BTreeMap::new();
        for &(u, v) in &self.layer2_edges {
            out.entry(u).or_default().push(v);
            out.entry(v).or_default().push(u);
        }
        out
    }

    /// Graphviz rendering of layer 1; `labels` names each node.
    pub fn to_dot(&self, labels: &[String]) -> String {
        let mut s = String::from("graph regrasp {\n  node [shape=circle];\n");
        for node in 0..self.node_count() {
            let label = labels.get(node).cloned().unwrap_or_else(|| format!("p{}", self.layer1_nodes[node]));
            let _ = writeln!(s, "  n{node} [label=\"{label}\", xlabel=\"{}\"];", self.grasp_assoc[node].len());
        }
        for &(a, b) in &self.layer1_edges {
            let _ = writeln!(s, "  n{a} -- n{b} [label=\"{}\"];", self.shared_grasps(a, b).len());
        }
        s.push_str("}\n");
        s
    }
}
