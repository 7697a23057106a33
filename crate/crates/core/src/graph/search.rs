use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::RegraspGraph;
use crate::geometry::Pose;
use crate::grasp::Grasp;

/// Stand-in for inverse kinematics and arm collision checks: accepts or
/// rejects a hand pose given in the world frame.
pub trait FeasibilityOracle: Sync {
    fn feasible(&self, hand_pose: &Pose) -> bool;
}

impl<F: Fn(&Pose) -> bool + Sync> FeasibilityOracle for F {
    fn feasible(&self, hand_pose: &Pose) -> bool {
        self(hand_pose)
    }
}

/// One pick-and-place under a fixed grasp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub pick: usize,
    pub grasp: usize,
    pub place: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    NoPlacementMatch,
    GraphDisconnected,
    OracleExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanResult {
    pub feasible: bool,
    /// Placement indices from start to goal.
    pub placement_path: Vec<usize>,
    /// Graph nodes behind `placement_path`.
    pub node_path: Vec<usize>,
    pub grasp_sequence: Vec<Transfer>,
    pub regrasp_count: usize,
    /// Placement paths examined, including the successful one.
    pub paths_tried: usize,
    pub failure: Option<FailureKind>,
}

impl PlanResult {
    pub fn infeasible(kind: FailureKind, paths_tried: usize) -> PlanResult {
        PlanResult {
            feasible: false,
            placement_path: Vec::new(),
            node_path: Vec::new(),
            grasp_sequence: Vec::new(),
            regrasp_count: 0,
            paths_tried,
            failure: Some(kind),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    /// Placement paths tried before giving up.
    pub path_budget: usize,
    /// Cap on depth-first expansions while enumerating paths.
    pub expansion_cap: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { path_budget: 20, expansion_cap: 200_000 }
    }
}

fn hop_distances(graph: &RegraspGraph, goal: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; graph.node_count()];
    dist[goal] = 0;
    let mut queue = VecDeque::from([goal]);
    while let Some(u) = queue.pop_front() {
        for &v in graph.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Minimum-hop node path, lexicographically smallest among ties.
pub fn shortest_placement_path(graph: &RegraspGraph, init: usize, goal: usize) -> Option<Vec<usize>> {
    let dist = hop_distances(graph, goal);
    if dist[init] == usize::MAX {
        return None;
    }
    let mut path = vec![init];
    let mut u = init;
    while u != goal {
        u = *graph.neighbors(u).iter().find(|&&v| dist[v] + 1 == dist[u])?;
        path.push(u);
    }
    Some(path)
}

/// Simple paths from `init` to `goal` by nondecreasing hop count,
/// lexicographic within a hop count, at most `limits.path_budget` of them.
pub fn enumerate_paths(graph: &RegraspGraph, init: usize, goal: usize, limits: &SearchLimits) -> Vec<Vec<usize>> {
    let dist = hop_distances(graph, goal);
    let mut out = Vec::new();
    if dist[init] == usize::MAX || limits.path_budget == 0 {
        return out;
    }
    if init == goal {
        out.push(vec![init]);
        return out;
    }
    struct Walk<'a> {
        graph: &'a RegraspGraph,
        dist: &'a [usize],
        goal: usize,
        hops: usize,
        path: Vec<usize>,
        visited: Vec<bool>,
        expansions: usize,
        cap: usize,
        budget: usize,
    }
    impl Walk<'_> {
        fn run(&mut self, out: &mut Vec<Vec<usize>>) {
            let u = *self.path.last().expect("non-empty path");
            let used = self.path.len() - 1;
            if u == self.goal {
                if used == self.hops {
                    out.push(self.path.clone());
                }
                return;
            }
            for &v in self.graph.neighbors(u) {
                if out.len() >= self.budget || self.expansions >= self.cap {
                    return;
                }
                if self.visited[v] || self.dist[v] == usize::MAX || used + 1 + self.dist[v] > self.hops {
                    continue;
                }
                self.expansions += 1;
                self.visited[v] = true;
                self.path.push(v);
                self.run(out);
                self.path.pop();
                self.visited[v] = false;
            }
        }
    }
    let n = graph.node_count();
    let mut walk = Walk {
        graph,
        dist: &dist,
        goal,
        hops: dist[init],
        path: vec![init],
        visited: vec![false; n],
        expansions: 0,
        cap: limits.expansion_cap,
        budget: limits.path_budget,
    };
    walk.visited[init] = true;
    for hops in dist[init]..n {
        walk.hops = hops;
        walk.run(&mut out);
        if out.len() >= limits.path_budget || walk.expansions >= limits.expansion_cap {
            break;
        }
    }
    out
}

/// Transfers along a node path: consecutive pairs, or a single in-place
/// transfer for a one-node path.
fn transfer_pairs(path: &[usize]) -> Vec<(usize, usize)> {
    if path.len() == 1 {
        vec![(path[0], path[0])]
    } else {
        path.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

/// Grasp per transfer along `path`, chosen by depth-first backtracking in
/// ascending grasp id. `check(node, grasp)` decides whether the hand pose
/// of `grasp` is usable at `node`. Consecutive grasps differ.
pub fn extract_grasp_sequence_with(
    graph: &RegraspGraph,
    path: &[usize],
    check: &mut dyn FnMut(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    let pairs = transfer_pairs(path);
    let options: Vec<Vec<usize>> = pairs
        .iter()
        .map(|&(a, b)| if a == b { graph.grasp_assoc[a].clone() } else { graph.shared_grasps(a, b) })
        .collect();
    let mut failed: HashSet<(usize, Option<usize>)> = HashSet::new();
    let mut chosen = Vec::with_capacity(pairs.len());
    fn assign(
        t: usize,
        prev: Option<usize>,
        pairs: &[(usize, usize)],
        options: &[Vec<usize>],
        check: &mut dyn FnMut(usize, usize) -> bool,
        failed: &mut HashSet<(usize, Option<usize>)>,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if t == pairs.len() {
            return true;
        }
        if failed.contains(&(t, prev)) {
            return false;
        }
        let (pick, place) = pairs[t];
        for &g in &options[t] {
            if Some(g) == prev || !check(pick, g) || !check(place, g) {
                continue;
            }
            chosen.push(g);
            if assign(t + 1, Some(g), pairs, options, check, failed, chosen) {
                return true;
            }
            chosen.pop();
        }
        failed.insert((t, prev));
        false
    }
    assign(0, None, &pairs, &options, check, &mut failed, &mut chosen).then_some(chosen)
}

/// Tries `path`, then further paths between its endpoints in enumeration
/// order, until a grasp assignment passes the oracle or the budget runs out.
pub fn extract_grasp_sequence(
    graph: &RegraspGraph,
    path: &[usize],
    node_poses: &[Pose],
    grasps: &[Grasp],
    oracle: &dyn FeasibilityOracle,
    limits: &SearchLimits,
) -> PlanResult {
    let by_id: HashMap<usize, &Grasp> = grasps.iter().map(|g| (g.id, g)).collect();
    let mut memo: HashMap<(usize, usize), bool> = HashMap::new();
    let mut check = |node: usize, g: usize| {
        *memo.entry((node, g)).or_insert_with(|| {
            let Some(grasp) = by_id.get(&g) else { return false };
            oracle.feasible(&node_poses[node].then_after(&grasp.hand_pose()))
        })
    };
    let (init, goal) = (path[0], *path.last().expect("non-empty path"));
    let mut candidates = vec![path.to_vec()];
    let mut tried = 0;
    let mut enumerated = false;
    let mut k = 0;
    while tried < limits.path_budget {
        if k == candidates.len() {
            if enumerated {
                break;
            }
            enumerated = true;
            candidates.extend(enumerate_paths(graph, init, goal, limits).into_iter().filter(|p| p != path));
            if k == candidates.len() {
                break;
            }
        }
        let candidate = &candidates[k];
        k += 1;
        tried += 1;
        if let Some(seq) = extract_grasp_sequence_with(graph, candidate, &mut check) {
            let transfers: Vec<Transfer> = transfer_pairs(candidate)
                .iter()
                .zip(&seq)
                .map(|(&(a, b), &g)| Transfer {
                    pick: graph.layer1_nodes[a],
                    grasp: g,
                    place: graph.layer1_nodes[b],
                })
                .collect();
            return PlanResult {
                feasible: true,
                placement_path: candidate.iter().map(|&n| graph.layer1_nodes[n]).collect(),
                node_path: candidate.clone(),
                regrasp_count: transfers.len() - 1,
                grasp_sequence: transfers,
                paths_tried: tried,
                failure: None,
            };
        }
    }
    PlanResult::infeasible(FailureKind::OracleExhausted, tried)
}
