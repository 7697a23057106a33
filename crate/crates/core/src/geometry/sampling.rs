use nalgebra::{Point3, Vector3};
use serde::{Deserialize, Serialize};

use super::mesh::Mesh;
use super::regions::{flat_regions, FlatRegion};
use crate::tolerance::Tolerances;

/// Default spacing of the per-face sampling grid, meters.
pub const DEFAULT_SAMPLE_STEP: f64 = 0.01;
/// Samples closer than this to a face boundary are dropped, meters.
pub const DEFAULT_SAMPLE_MARGIN: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSample {
    pub point: Point3<f64>,
    /// Triangle containing the point.
    pub face_index: usize,
    /// Flat region the grid was laid out on.
    pub region: usize,
    /// Outward unit normal.
    pub normal: Vector3<f64>,
}

/// Principal in-plane axes of a flat region's vertex set.
///
/// Equal eigenvalues leave the axes undetermined; the first axis then
/// follows the region's longest boundary edge (earliest on ties). The sign
/// is fixed by the lowest-index vertex with a non-zero offset from the
/// centroid along the axis, and the second axis is `normal × first`. Every
/// choice depends only on the mesh itself, so the axes move rigidly with it.
pub fn region_axes(mesh: &Mesh, region: &FlatRegion) -> (Vector3<f64>, Vector3<f64>) {
    let n = region.normal;
    let (u, v) = plane_basis(&n);
    let c = region.centroid;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &vi in &region.vertices {
        let d = mesh.vertices()[vi] - c;
        let (x, y) = (d.dot(&u), d.dot(&v));
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    let half_diff = 0.5 * (sxx - syy);
    let disc = (half_diff * half_diff + sxy * sxy).sqrt();
    let trace = sxx + syy;
    let major = if disc <= 1e-9 * trace.max(f64::MIN_POSITIVE) {
        longest_boundary_direction(mesh, region).unwrap_or(u)
    } else {
        let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
        u * theta.cos() + v * theta.sin()
    };
    let a = oriented_by_vertices(mesh, region, major - n * n.dot(&major));
    (a, n.cross(&a))
}

fn longest_boundary_direction(mesh: &Mesh, region: &FlatRegion) -> Option<Vector3<f64>> {
    let vs = mesh.vertices();
    let mut best: Option<(f64, Vector3<f64>)> = None;
    for e in &region.boundary {
        let d = vs[e[1]] - vs[e[0]];
        let len = d.norm();
        if best.is_none_or(|(l, _)| len > l * (1.0 + 1e-9)) {
            best = Some((len, d));
        }
    }
    best.filter(|(l, _)| *l > 0.0).map(|(l, d)| d / l)
}

fn oriented_by_vertices(mesh: &Mesh, region: &FlatRegion, axis: Vector3<f64>) -> Vector3<f64> {
    let axis = axis.normalize();
    let scale = mesh.scale().max(f64::MIN_POSITIVE);
    for &vi in &region.vertices {
        let t = (mesh.vertices()[vi] - region.centroid).dot(&axis);
        if t.abs() > 1e-9 * scale {
            return if t < 0.0 { -axis } else { axis };
        }
    }
    axis
}

fn plane_basis(n: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let helper = if n.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let u = (helper - n * n.dot(&helper)).normalize();
    (u, n.cross(&u))
}

/// Grid samples on every flat region, spaced `step` along the region's
/// principal axes and centered on its area centroid.
pub fn sample_surface(mesh: &Mesh, step: f64, margin: f64) -> Vec<SurfaceSample> {
    let tol = Tolerances::default();
    let regions = flat_regions(mesh, tol.region_angle);
    sample_regions(mesh, &regions, step, margin, &tol)
}

pub fn sample_regions(
    mesh: &Mesh,
    regions: &[FlatRegion],
    step: f64,
    margin: f64,
    tol: &Tolerances,
) -> Vec<SurfaceSample> {
    assert!(step > 0.0, "sampling step must be positive");
    let mut out = Vec::new();
    for (ri, region) in regions.iter().enumerate() {
        let (a1, a2) = region_axes(mesh, region);
        let c = region.centroid;
        let (mut lo1, mut hi1, mut lo2, mut hi2) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &vi in &region.vertices {
            let d = mesh.vertices()[vi] - c;
            lo1 = lo1.min(d.dot(&a1));
            hi1 = hi1.max(d.dot(&a1));
            lo2 = lo2.min(d.dot(&a2));
            hi2 = hi2.max(d.dot(&a2));
        }
        let slack = 1e-9;
        let range = |lo: f64, hi: f64| {
            ((lo / step - slack).ceil() as i64)..=((hi / step + slack).floor() as i64)
        };
        for i in range(lo1, hi1) {
            for j in range(lo2, hi2) {
                let p = c + a1 * (i as f64 * step) + a2 * (j as f64 * step);
                let Some(face) = region.contains_point(mesh, &p, tol.geom) else {
                    continue;
                };
                if region.boundary_distance(mesh, &p) < margin - tol.geom {
                    continue;
                }
                out.push(SurfaceSample {
                    point: p,
                    face_index: face,
                    region: ri,
                    normal: region.normal,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn square_face_grid() {
        // 10 cm cube: every face is a 10x10 cm square.
        let m = shapes::cuboid(0.1, 0.1, 0.1);
        let s = sample_surface(&m, 0.02, 0.005);
        assert_eq!(s.len(), 6 * 25);
        for region in 0..6 {
            assert_eq!(s.iter().filter(|x| x.region == region).count(), 25);
        }
    }

    #[test]
    fn narrow_face_has_no_samples() {
        // 8 mm thick slab: the four thin side faces cannot clear a 5 mm margin.
        let m = shapes::cuboid(0.1, 0.1, 0.008);
        let s = sample_surface(&m, 0.01, 0.005);
        for x in &s {
            assert!(x.normal.z.abs() > 0.99, "sample on a thin side: {x:?}");
        }
        assert!(!s.is_empty());
    }

    #[test]
    fn samples_lie_on_faces_and_clear_margin() {
        let m = shapes::l_block();
        let regions = flat_regions(&m, 1e-3);
        let s = sample_surface(&m, 0.01, 0.005);
        assert!(!s.is_empty());
        for x in &s {
            let [a, b, c] = m.triangle(x.face_index);
            let n = m.normal(x.face_index);
            assert!(n.dot(&(x.point - a)).abs() < 1e-12);
            let w = crate::geometry::predicates::projected_barycentric(&x.point, &a, &b, &c).unwrap();
            assert!(w.iter().all(|&v| v >= -1e-9));
            assert!(regions[x.region].boundary_distance(&m, &x.point) >= 0.005 - 1e-9);
        }
    }

    #[test]
    fn deterministic() {
        let m = shapes::pot_lid();
        assert_eq!(sample_surface(&m, 0.01, 0.005), sample_surface(&m, 0.01, 0.005));
    }
}
