use std::f64::consts::TAU;

use nalgebra::{Point2, Point3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::overlap::{clip_convex, point_in_convex, polygon_area_centroid_2d};
use super::{Grasp, GripperModel};
use crate::error::Result;
use crate::geometry::predicates::{box_intersects_mesh, TriangleBounds};
use crate::geometry::regions::{flat_regions, FlatRegion};
use crate::geometry::sampling::region_axes;
use crate::geometry::Mesh;
use crate::tolerance::Tolerances;
use crate::SCHEMA_VERSION;

/// Two-finger antipodal test: the line between the contacts lies inside
/// both friction cones.
pub fn check_force_closure(
    p1: &Point3<f64>,
    n1: &Vector3<f64>,
    p2: &Point3<f64>,
    n2: &Vector3<f64>,
    mu: f64,
) -> bool {
    let d = p2 - p1;
    if d.norm() == 0.0 || mu <= 0.0 {
        return false;
    }
    let half_angle = mu.atan();
    let angle = |u: &Vector3<f64>, v: &Vector3<f64>| (u.dot(v) / (u.norm() * v.norm())).clamp(-1.0, 1.0).acos();
    angle(&d, &-n1) <= half_angle + 1e-12 && angle(&-d, &-n2) <= half_angle + 1e-12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraspSet {
    pub schema_version: u32,
    pub mesh_hash: String,
    pub gripper: GripperModel,
    pub density: usize,
    pub mu: f64,
    pub grasps: Vec<Grasp>,
}

impl GraspSet {
    pub fn compute(mesh: &Mesh, gripper: &GripperModel, density: usize, mu: f64) -> Result<GraspSet> {
        gripper.validate()?;
        Ok(GraspSet {
            schema_version: SCHEMA_VERSION,
            mesh_hash: mesh.content_hash(),
            gripper: *gripper,
            density,
            mu,
            grasps: enumerate_total_grasps(mesh, gripper, density, mu),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Grasp center and jaw data for one pair of opposed flat regions.
struct FacePair {
    regions: [usize; 2],
    normals: [Vector3<f64>; 2],
    center: Point3<f64>,
    opening: f64,
    axis: Vector3<f64>,
}

/// The object's total grasp set, ids assigned in (region pair, direction)
/// order.
pub fn enumerate_total_grasps(mesh: &Mesh, gripper: &GripperModel, density: usize, mu: f64) -> Vec<Grasp> {
    if density == 0 {
        return Vec::new();
    }
    let tol = Tolerances::default();
    let regions = flat_regions(mesh, tol.region_angle);
    let cos_limit = tol.region_angle.cos();
    let mut pairs = Vec::new();
    for i in 0..regions.len() {
        for j in i + 1..regions.len() {
            if regions[i].normal.dot(&-regions[j].normal) >= cos_limit {
                pairs.push((i, j));
            }
        }
    }
    let bounds = TriangleBounds::new(mesh);
    let mut grasps: Vec<Grasp> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let Some(pair) = face_pair(mesh, &regions, i, j, gripper.max_opening) else {
                return Vec::new();
            };
            let n = pair.normals[0];
            let side = n.cross(&pair.axis);
            (0..density)
                .filter_map(|k| {
                    let phi = TAU * k as f64 / density as f64;
                    let g = Grasp {
                        id: 0,
                        center: pair.center,
                        jaw_axis: n,
                        approach: pair.axis * phi.cos() + side * phi.sin(),
                        opening: pair.opening,
                        regions: pair.regions,
                        normals: pair.normals,
                    };
                    let [c1, c2] = g.contacts();
                    if !check_force_closure(&c1, &g.normals[0], &c2, &g.normals[1], mu) {
                        return None;
                    }
                    let collides = gripper.boxes(&g).iter().any(|b| box_intersects_mesh(b, mesh, Some(&bounds)));
                    (!collides).then_some(g)
                })
                .collect()
        })
        .collect::<Vec<Vec<Grasp>>>()
        .into_iter()
        .flatten()
        .collect();
    for (id, g) in grasps.iter_mut().enumerate() {
        g.id = id;
    }
    grasps
}

fn face_pair(mesh: &Mesh, regions: &[FlatRegion], i: usize, j: usize, max_opening: f64) -> Option<FacePair> {
    let (ri, rj) = (&regions[i], &regions[j]);
    let n = ri.normal;
    let opening = n.dot(&(ri.centroid - rj.centroid));
    if opening <= 0.0 || opening > max_opening {
        return None;
    }
    let (u1, _) = region_axes(mesh, ri);
    let u2 = n.cross(&u1);
    let origin = ri.centroid;
    let to2d = |p: &Point3<f64>| Point2::new((p - origin).dot(&u1), (p - origin).dot(&u2));
    let project = |region: &FlatRegion| -> Vec<[Point2<f64>; 3]> {
        region
            .triangles
            .iter()
            .map(|&t| {
                let [a, b, c] = mesh.triangle(t);
                let (a, b, c) = (to2d(&a), to2d(&b), to2d(&c));
                let ccw = (b - a).perp(&(c - a)) >= 0.0;
                if ccw {
                    [a, b, c]
                } else {
                    [a, c, b]
                }
            })
            .collect()
    };
    let (ti, tj) = (project(ri), project(rj));
    let scale = mesh.scale();
    let min_area = 1e-12 * scale * scale;
    let mut pieces: Vec<(f64, Point2<f64>, Vec<Point2<f64>>)> = Vec::new();
    for a in &ti {
        for b in &tj {
            let poly = clip_convex(a, b);
            if let Some((area, c)) = polygon_area_centroid_2d(&poly) {
                if area > min_area {
                    pieces.push((area, c, poly));
                }
            }
        }
    }
    if pieces.is_empty() {
        return None;
    }
    let total: f64 = pieces.iter().map(|p| p.0).sum();
    let mean = pieces.iter().fold(Point2::origin(), |acc, p| acc + p.1.coords * (p.0 / total));
    let eps = 1e-12 * scale * scale;
    let inside = pieces.iter().any(|p| point_in_convex(&mean, &p.2, eps));
    let c2 = if inside {
        mean
    } else {
        // Non-convex overlap whose centroid falls in a hole: use the largest
        // piece, the earliest one among pieces of equal area.
        pieces.iter().fold(&pieces[0], |best, p| if p.0 > best.0 * (1.0 + 1e-9) { p } else { best }).1
    };
    let center = origin + u1 * c2.x + u2 * c2.y - n * (0.5 * opening);
    Some(FacePair { regions: [i, j], normals: [n, rj.normal], center, opening, axis: u1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn cube_pairs_times_density() {
        let cube = shapes::cuboid(0.03, 0.03, 0.03);
        let g = enumerate_total_grasps(&cube, &GripperModel::default(), 8, 0.5);
        assert_eq!(g.len(), 24);
        for (k, grasp) in g.iter().enumerate() {
            assert_eq!(grasp.id, k);
            assert!(grasp.center.coords.norm() < 1e-12);
            assert!((grasp.opening - 0.03).abs() < 1e-12);
            assert!(grasp.jaw_axis.dot(&grasp.approach).abs() < 1e-12);
        }
    }

    #[test]
    fn too_wide_cube_has_no_grasps() {
        let cube = shapes::cuboid(0.1, 0.1, 0.1);
        assert!(enumerate_total_grasps(&cube, &GripperModel::default(), 8, 0.5).is_empty());
    }

    #[test]
    fn force_closure_examples() {
        let (p1, p2) = (Point3::new(0.0, 0.0, 0.5), Point3::new(0.0, 0.0, -0.5));
        assert!(check_force_closure(&p1, &Vector3::z(), &p2, &-Vector3::z(), 1e-3));
        let q = Point3::new(0.5, 0.0, 0.0);
        assert!(!check_force_closure(&p1, &Vector3::z(), &q, &Vector3::x(), 0.5));
    }

    #[test]
    fn l_block_inner_pair() {
        let g = enumerate_total_grasps(&shapes::l_block(), &GripperModel::default(), 8, 0.5);
        assert!(!g.is_empty());
        // The 9 cm outer span exceeds the opening; every opening is 3 cm.
        assert!(g.iter().all(|x| (x.opening - 0.03).abs() < 1e-9));
    }
}
