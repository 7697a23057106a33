use nalgebra::{Point3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{stability, PinPlacement};
use crate::error::{Error, Result};
use crate::geometry::predicates::{segment_intersects_mesh_with, TriangleBounds};
use crate::geometry::{ConvexHull, Mesh, Pose, SurfaceSample};
use crate::tolerance::Tolerances;

/// Radius around the touch point inside which pin/mesh contact is allowed.
const PIN_TOUCH_EXCLUSION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PinParams {
    pub pin_length: f64,
    pub mu: f64,
    /// Where the pin stands on the floor in the canonical world pose.
    pub pin_base_world: [f64; 2],
}

impl Default for PinParams {
    fn default() -> Self {
        PinParams { pin_length: 0.03, mu: 0.5, pin_base_world: [0.0, 0.0] }
    }
}

/// Pin bases `b` with `|x−b| = l` and `x−b` perpendicular to both `e1−b`
/// and `e2−b`.
///
/// `b` lies on the circle of radius `l` about the edge line's foot point
/// direction; two solutions in general, one at tangency, none when the edge
/// line is closer to `x` than `l`.
pub fn solve_pin_base(x: &Point3<f64>, e1: &Point3<f64>, e2: &Point3<f64>, l: f64) -> Vec<Point3<f64>> {
    if l <= 0.0 || !l.is_finite() {
        return Vec::new();
    }
    let axis = e2 - e1;
    let len = axis.norm();
    if len == 0.0 {
        return Vec::new();
    }
    let d = axis / len;
    let rel = x - e1;
    let w = rel - d * rel.dot(&d);
    let h = w.norm();
    let tangent_tol = 1e-12 * h.max(l);
    if h < l - tangent_tol || h == 0.0 {
        return Vec::new();
    }
    let u = w / h;
    let v = d.cross(&u);
    let c = (l / h).min(1.0);
    if (h - l).abs() <= tangent_tol {
        return vec![x - u * l];
    }
    let s = (1.0 - c * c).sqrt();
    let n_plus = u * c + v * s;
    let n_minus = u * c - v * s;
    vec![x - n_plus * l, x - n_minus * l]
}

/// Object-to-world transform resting the plane through `e1, e2, b` on the
/// floor, with `b` at `pin_base_world` and `x` straight above it.
pub fn pin_placement_pose(
    x: &Point3<f64>,
    e1: &Point3<f64>,
    e2: &Point3<f64>,
    b: &Point3<f64>,
    pin_base_world: [f64; 2],
) -> Result<Pose> {
    let edge = e2 - e1;
    let span = edge.norm().max((b - e1).norm());
    if edge.cross(&(b - e1)).norm() <= 1e-12 * span * span {
        return Err(Error::DegenerateFrame("edge endpoints and pin base are collinear".into()));
    }
    let up = x - b;
    if up.norm() == 0.0 {
        return Err(Error::DegenerateFrame("pin has zero length".into()));
    }
    let z = up.normalize();
    let x_axis = (edge - z * z.dot(&edge)).normalize();
    let y_axis = z.cross(&x_axis);
    let rotation = Pose::from_rows(&x_axis, &y_axis, &z);
    let target = Vector3::new(pin_base_world[0], pin_base_world[1], 0.0);
    Ok(Pose::new(rotation, target - rotation * b.coords))
}

/// Coulomb cone test between a pin axis (base to tip) and the outward
/// surface normal at the tip.
pub fn pin_within_friction_cone(pin_axis: &Vector3<f64>, outward_normal: &Vector3<f64>, mu: f64) -> bool {
    if mu <= 0.0 {
        return false;
    }
    let cos = (pin_axis.dot(&-outward_normal) / (pin_axis.norm() * outward_normal.norm())).clamp(-1.0, 1.0);
    cos.acos() <= mu.atan() + 1e-12
}

pub fn check_friction(placement: &PinPlacement, mu: f64) -> bool {
    pin_within_friction_cone(&placement.pin_axis(), &placement.touch_point.normal, mu)
}

/// Every candidate surviving the filter chain, ordered by (edge, sample,
/// solution). The per-edge selection happens in [`select_highest_per_edge`].
pub fn pin_candidates(
    mesh: &Mesh,
    hull: &ConvexHull,
    com: &Point3<f64>,
    samples: &[SurfaceSample],
    params: &PinParams,
    tol: &Tolerances,
) -> Vec<PinPlacement> {
    let l = params.pin_length;
    if l <= 0.0 {
        return Vec::new();
    }
    let bounds = TriangleBounds::new(mesh);
    hull.edges
        .par_iter()
        .enumerate()
        .map(|(ei, edge)| {
            let (e1, e2) = hull.edge_points(edge);
            let mut out = Vec::new();
            for (si, sample) in samples.iter().enumerate() {
                for b in solve_pin_base(&sample.point, &e1, &e2, l) {
                    if let Some(p) = evaluate(mesh, &bounds, hull, com, sample, si, ei, &e1, &e2, &b, params, tol) {
                        out.push(p);
                    }
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn evaluate(
    mesh: &Mesh,
    bounds: &TriangleBounds,
    hull: &ConvexHull,
    com: &Point3<f64>,
    sample: &SurfaceSample,
    sample_index: usize,
    edge_index: usize,
    e1: &Point3<f64>,
    e2: &Point3<f64>,
    b: &Point3<f64>,
    params: &PinParams,
    tol: &Tolerances,
) -> Option<PinPlacement> {
    let x = sample.point;
    let up = (x - b) / params.pin_length;
    // The object must sit above the floor plane through e1, e2, b.
    if hull.min_along(&up) - up.dot(&b.coords) < -tol.geom {
        return None;
    }
    if !pin_within_friction_cone(&up, &sample.normal, params.mu) {
        return None;
    }
    if !stability::pin_stable(com, e1, e2, b, tol.stability_margin) {
        return None;
    }
    if segment_intersects_mesh_with(b, &x, mesh, Some(bounds), PIN_TOUCH_EXCLUSION, &x) {
        return None;
    }
    let world_pose = pin_placement_pose(&x, e1, e2, b, params.pin_base_world).ok()?;
    let com_height = up.dot(&(com - b));
    Some(PinPlacement {
        touch_point: *sample,
        sample_index,
        hull_edge: edge_index,
        edge: [*e1, *e2],
        pin_base: *b,
        pin_length: params.pin_length,
        world_pose,
        com_height,
    })
}

/// Relative COM-height difference below which two candidates tie.
pub const HEIGHT_TIE: f64 = 1e-9;

/// Keeps the highest-COM candidate per hull edge, then drops placements
/// whose pose repeats an earlier one.
///
/// Heights within [`HEIGHT_TIE`] (relative) count as equal and the earlier
/// candidate wins, so rounding noise cannot change the choice when the mesh
/// is scaled or moved.
pub fn select_highest_per_edge(candidates: &[PinPlacement], dedup_tol: f64) -> Vec<PinPlacement> {
    let mut best: Vec<PinPlacement> = Vec::new();
    for c in candidates {
        match best.last_mut() {
            Some(last) if last.hull_edge == c.hull_edge => {
                let tie = HEIGHT_TIE * c.com_height.abs().max(last.com_height.abs());
                if c.com_height > last.com_height + tie {
                    *last = c.clone();
                }
            }
            _ => best.push(c.clone()),
        }
    }
    let mut out: Vec<PinPlacement> = Vec::new();
    for p in best {
        if !out.iter().any(|q| same_pose(q, &p, dedup_tol)) {
            out.push(p);
        }
    }
    out
}

fn same_pose(a: &PinPlacement, b: &PinPlacement, tol: f64) -> bool {
    (a.pin_axis() - b.pin_axis()).norm() <= tol && (a.pin_base - b.pin_base).norm() <= tol
}

pub fn enumerate_pin_placements(
    mesh: &Mesh,
    hull: &ConvexHull,
    com: &Point3<f64>,
    samples: &[SurfaceSample],
    params: &PinParams,
    tol: &Tolerances,
) -> Vec<PinPlacement> {
    select_highest_per_edge(&pin_candidates(mesh, hull, com, samples, params, tol), tol.pose_dedup)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64, z: f64) -> Point3<f64> {
        Point3::new(x, y, z)
    }

    #[test]
    fn symmetric_solutions() {
        let sols = solve_pin_base(&p(0.5, 0.0, 2.0), &p(0.0, 0.0, 0.0), &p(1.0, 0.0, 0.0), 1.0);
        assert_eq!(sols.len(), 2);
        let r3 = 3f64.sqrt() / 2.0;
        let mut ys: Vec<f64> = sols.iter().map(|b| b.y).collect();
        ys.sort_by(f64::total_cmp);
        assert!((ys[0] + r3).abs() < 1e-12 && (ys[1] - r3).abs() < 1e-12);
        for b in &sols {
            assert!((b.x - 0.5).abs() < 1e-12 && (b.z - 1.5).abs() < 1e-12);
            let r = super::super::base_residuals(&p(0.5, 0.0, 2.0), &p(0.0, 0.0, 0.0), &p(1.0, 0.0, 0.0), b, 1.0);
            assert!(r.iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn infeasible_and_tangent() {
        let e1 = p(0.0, 0.0, 0.0);
        let e2 = p(1.0, 0.0, 0.0);
        assert!(solve_pin_base(&p(0.5, 0.0, 0.5), &e1, &e2, 1.0).is_empty());
        assert!(solve_pin_base(&p(0.5, 0.0, 0.5), &e1, &e2, 0.0).is_empty());
        let t = solve_pin_base(&p(0.5, 0.0, 1.0), &e1, &e2, 1.0);
        assert_eq!(t.len(), 1);
        assert!((t[0] - p(0.5, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pose_maps_contacts() {
        let (x, e1, e2) = (p(0.5, 0.0, 2.0), p(0.0, 0.0, 0.0), p(1.0, 0.0, 0.0));
        for b in solve_pin_base(&x, &e1, &e2, 1.0) {
            let pose = pin_placement_pose(&x, &e1, &e2, &b, [0.0, 0.0]).unwrap();
            for q in [e1, e2, b] {
                assert!(pose.transform_point(&q).z.abs() < 1e-9);
            }
            assert!((pose.transform_point(&x) - p(0.0, 0.0, 1.0)).norm() < 1e-9);
            assert!((pose.inverse().transform_point(&p(0.0, 0.0, 1.0)) - x).norm() < 1e-9);
        }
    }

    #[test]
    fn collinear_frame_is_an_error() {
        let r = pin_placement_pose(&p(0.0, 0.0, 1.0), &p(0.0, 0.0, 0.0), &p(1.0, 0.0, 0.0), &p(2.0, 0.0, 0.0), [0.0, 0.0]);
        assert!(matches!(r, Err(Error::DegenerateFrame(_))));
    }

    #[test]
    fn friction_cone_examples() {
        let n = Vector3::new(0.0, 0.0, 1.0);
        assert!(pin_within_friction_cone(&-n, &n, 1e-6));
        let tilted = Vector3::new(1.0, 0.0, -1.0);
        assert!(!pin_within_friction_cone(&tilted, &n, 0.5));
        assert!(pin_within_friction_cone(&tilted, &n, 1.5));
    }

    #[test]
    fn selection_keeps_highest() {
        let (x, e1, e2) = (p(0.5, 0.0, 2.0), p(0.0, 0.0, 0.0), p(1.0, 0.0, 0.0));
        let sample = SurfaceSample { point: x, face_index: 0, region: 0, normal: -Vector3::z() };
        let make = |edge: usize, h: f64, b: Point3<f64>| PinPlacement {
            touch_point: sample,
            sample_index: 0,
            hull_edge: edge,
            edge: [e1, e2],
            pin_base: b,
            pin_length: 1.0,
            world_pose: Pose::identity(),
            com_height: h,
        };
        let sols = solve_pin_base(&x, &e1, &e2, 1.0);
        let cands = vec![make(0, 0.1, sols[0]), make(0, 0.3, sols[1]), make(1, 0.2, sols[0]), make(2, 0.5, p(9.0, 9.0, 0.0))];
        let out = select_highest_per_edge(&cands, 1e-6);
        // Edge 1's winner repeats edge 0's losing pose, so it survives; edge 2 differs.
        assert_eq!(out.iter().map(|p| p.hull_edge).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(out[0].com_height, 0.3);
    }
}
