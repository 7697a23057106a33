use nalgebra::{Point3, Vector3};

use super::stability::com_in_polygon;
use super::PlanarPlacement;
use crate::geometry::{ConvexHull, Pose};

/// One placement per hull face whose support polygon holds the COM
/// projection with the given margin.
pub fn enumerate_planar_placements(hull: &ConvexHull, com: &Point3<f64>, margin: f64) -> Vec<PlanarPlacement> {
    hull.faces
        .iter()
        .enumerate()
        .filter_map(|(fi, face)| {
            let polygon = hull.face_points(fi);
            if !com_in_polygon(com, &polygon, &face.normal, margin) {
                return None;
            }
            let z = -face.normal;
            let x = (polygon[1] - polygon[0]).normalize();
            let x = (x - z * z.dot(&x)).normalize();
            let y = z.cross(&x);
            let rotation = Pose::from_rows(&x, &y, &z);
            let c = rotation * com.coords;
            let translation = Vector3::new(-c.x, -c.y, face.offset);
            Some(PlanarPlacement {
                support_face: fi,
                face_normal: face.normal,
                support_polygon: polygon,
                world_pose: Pose::new(rotation, translation),
                com_height: face.offset - face.normal.dot(&com.coords),
            })
        })
        .collect()
}
