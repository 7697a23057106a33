use nalgebra::{Point3, Vector3};

use super::Placement;
use crate::geometry::point_in_triangle_projection;

pub(crate) fn pin_stable(
    com: &Point3<f64>,
    e1: &Point3<f64>,
    e2: &Point3<f64>,
    b: &Point3<f64>,
    margin: f64,
) -> bool {
    point_in_triangle_projection(com, e1, e2, b, margin)
}

/// Relative depth of the projection of `p` inside a convex polygon.
///
/// For each edge, the distance from `p` to the edge line is divided by the
/// largest distance of any polygon vertex to that line; the result is the
/// minimum over edges. On a triangle this equals the smallest barycentric
/// coordinate. `normal` is the polygon's outward normal; the polygon is
/// counter-clockwise about it.
pub fn com_in_polygon(p: &Point3<f64>, polygon: &[Point3<f64>], normal: &Vector3<f64>, margin: f64) -> bool {
    polygon_depth(p, polygon, normal).is_some_and(|d| d >= margin - 1e-12)
}

pub(crate) fn polygon_depth(p: &Point3<f64>, polygon: &[Point3<f64>], normal: &Vector3<f64>) -> Option<f64> {
    let k = polygon.len();
    if k < 3 {
        return None;
    }
    let mut depth = f64::INFINITY;
    for i in 0..k {
        let (a, b) = (polygon[i], polygon[(i + 1) % k]);
        let dir = b - a;
        let len = dir.norm();
        if len == 0.0 {
            continue;
        }
        let signed = |q: &Point3<f64>| dir.cross(&(q - a)).dot(normal) / len;
        let reach = polygon.iter().map(signed).fold(0.0, f64::max);
        if reach <= 0.0 {
            return None;
        }
        depth = depth.min(signed(p) / reach);
    }
    depth.is_finite().then_some(depth)
}

/// Whether the center of mass is supported with the given barycentric margin.
pub fn check_stability(placement: &Placement, com: &Point3<f64>, margin: f64) -> bool {
    match placement {
        Placement::Pin(p) => pin_stable(com, &p.edge[0], &p.edge[1], &p.pin_base, margin),
        Placement::Planar(p) => com_in_polygon(com, &p.support_polygon, &p.face_normal, margin),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_depth_is_min_barycentric() {
        let tri = [Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0)];
        let n = Vector3::z();
        let p = Point3::new(0.2, 0.3, 5.0);
        let d = polygon_depth(&p, &tri, &n).unwrap();
        assert!((d - 0.2).abs() < 1e-12);
    }

    #[test]
    fn square_center_and_outside() {
        let sq = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        ];
        let n = Vector3::z();
        assert!(com_in_polygon(&Point3::new(0.5, 0.5, 1.0), &sq, &n, 0.01));
        assert!(!com_in_polygon(&Point3::new(0.005, 0.5, 1.0), &sq, &n, 0.01));
        assert!(!com_in_polygon(&Point3::new(1.5, 0.5, 1.0), &sq, &n, 0.0));
    }
}
