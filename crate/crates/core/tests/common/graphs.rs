//! Abstract regrasp graphs and brute-force answers for them.

use std::collections::HashMap;

use nalgebra::{Point3, Vector3};
use pinregrasp::geometry::Pose;
use pinregrasp::grasp::{Grasp, PlacementGrasps};
use pinregrasp::graph::{extract_grasp_sequence, FeasibilityOracle, PlanResult, RegraspGraph, SearchLimits};
use rand::Rng;

pub fn assoc(sets: &[Vec<usize>]) -> Vec<PlacementGrasps> {
    sets.iter()
        .enumerate()
        .map(|(i, s)| {
            let mut ids = s.clone();
            ids.sort_unstable();
            ids.dedup();
            PlacementGrasps { placement_index: i, grasp_ids: ids }
        })
        .collect()
}

pub fn graph(sets: &[Vec<usize>]) -> RegraspGraph {
    RegraspGraph::build(&assoc(sets))
}

pub fn random_sets(r: &mut impl Rng, nodes: usize, grasps: usize, p: f64) -> Vec<Vec<usize>> {
    (0..nodes).map(|_| (0..grasps).filter(|_| r.random_bool(p)).collect()).collect()
}

pub fn shares(sets: &[Vec<usize>], a: usize, b: usize) -> Vec<usize> {
    sets[a].iter().copied().filter(|g| sets[b].contains(g)).collect()
}

/// Every simple path from `from` to `to`, by brute-force depth-first search.
pub fn all_simple_paths(sets: &[Vec<usize>], from: usize, to: usize) -> Vec<Vec<usize>> {
    fn walk(sets: &[Vec<usize>], path: &mut Vec<usize>, to: usize, out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        if u == to {
            out.push(path.clone());
            return;
        }
        for v in 0..sets.len() {
            if !path.contains(&v) && !shares(sets, u, v).is_empty() {
                path.push(v);
                walk(sets, path, to, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(sets, &mut vec![from], to, &mut out);
    out
}

/// Abstract instance: node `i` sits at `x = i`, grasp `g` has its center at
/// `y = g`, so the world hand pose encodes both and the oracle can be a
/// lookup table.
pub struct Fixture {
    pub graph: RegraspGraph,
    pub poses: Vec<Pose>,
    pub grasps: Vec<Grasp>,
    pub table: HashMap<(usize, usize), bool>,
}

pub struct Table<'a>(pub &'a HashMap<(usize, usize), bool>);

impl FeasibilityOracle for Table<'_> {
    fn feasible(&self, hand: &Pose) -> bool {
        let key = (hand.translation.x.round() as usize, hand.translation.y.round() as usize);
        self.0.get(&key).copied().unwrap_or(false)
    }
}

impl Fixture {
    pub fn new(sets: &[Vec<usize>], ok: impl Fn(usize, usize) -> bool) -> Fixture {
        let grasp_count = sets.iter().flatten().max().map_or(0, |m| m + 1);
        let grasps = (0..grasp_count)
            .map(|id| Grasp {
                id,
                center: Point3::new(0.0, id as f64, 0.0),
                jaw_axis: Vector3::y(),
                approach: Vector3::x(),
                opening: 0.01,
                regions: [0, 1],
                normals: [Vector3::y(), -Vector3::y()],
            })
            .collect();
        let poses = (0..sets.len()).map(|i| Pose::new(nalgebra::Rotation3::identity(), Vector3::new(i as f64, 0.0, 0.0))).collect();
        let mut table = HashMap::new();
        for n in 0..sets.len() {
            for g in 0..grasp_count {
                table.insert((n, g), ok(n, g));
            }
        }
        Fixture { graph: graph(sets), poses, grasps, table }
    }

    pub fn extract_with(&self, path: &[usize], limits: &SearchLimits) -> PlanResult {
        extract_grasp_sequence(&self.graph, path, &self.poses, &self.grasps, &Table(&self.table), limits)
    }

    pub fn extract(&self, path: &[usize]) -> PlanResult {
        self.extract_with(path, &SearchLimits::default())
    }

    /// Replays a plan: adjacency, shared grasps, changing grasps and the
    /// oracle at every pick and place.
    pub fn replay(&self, plan: &PlanResult) {
        assert!(plan.feasible);
        let path = &plan.node_path;
        let pairs: Vec<(usize, usize)> =
            if path.len() == 1 { vec![(path[0], path[0])] } else { path.windows(2).map(|w| (w[0], w[1])).collect() };
        assert_eq!(pairs.len(), plan.grasp_sequence.len());
        assert_eq!(plan.regrasp_count, pairs.len() - 1);
        for (k, (&(a, b), t)) in pairs.iter().zip(&plan.grasp_sequence).enumerate() {
            if a != b {
                assert!(self.graph.neighbors(a).contains(&b));
            }
            assert!(self.graph.grasp_assoc[a].contains(&t.grasp) && self.graph.grasp_assoc[b].contains(&t.grasp));
            assert!(self.table[&(a, t.grasp)] && self.table[&(b, t.grasp)]);
            if k > 0 {
                assert_ne!(plan.grasp_sequence[k - 1].grasp, t.grasp);
            }
        }
    }
}

/// Fewest regrasps over every simple path and every grasp assignment.
pub fn brute_force_regrasps(sets: &[Vec<usize>], ok: &dyn Fn(usize, usize) -> bool, a: usize, b: usize) -> Option<usize> {
    fn assignable(sets: &[Vec<usize>], ok: &dyn Fn(usize, usize) -> bool, pairs: &[(usize, usize)], prev: Option<usize>) -> bool {
        let Some((&(p, q), rest)) = pairs.split_first() else { return true };
        let options = if p == q { sets[p].clone() } else { shares(sets, p, q) };
        options.into_iter().any(|g| Some(g) != prev && ok(p, g) && ok(q, g) && assignable(sets, ok, rest, Some(g)))
    }
    all_simple_paths(sets, a, b)
        .into_iter()
        .filter(|path| {
            let pairs: Vec<(usize, usize)> =
                if path.len() == 1 { vec![(path[0], path[0])] } else { path.windows(2).map(|w| (w[0], w[1])).collect() };
            assignable(sets, ok, &pairs, None)
        })
        .map(|path| path.len().max(2) - 2)
        .min()
}

