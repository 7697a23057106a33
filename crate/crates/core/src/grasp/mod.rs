//! Parallel-jaw grasps: the object's total grasp set and its per-placement
//! subsets.

mod filter;
mod overlap;
mod total;

pub use filter::{associate_grasps, grasps_for_placement, GraspFilter, PlacementGrasps, TorqueLimit};
pub use overlap::{clip_convex, polygon_area_centroid_2d};
pub use total::{check_force_closure, enumerate_total_grasps, GraspSet};

use nalgebra::{Matrix3, Point3, Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{OrientedBox, Pose};

/// Box model of a two-finger parallel gripper.
///
/// Hand frame: `a` is the approach direction (palm toward fingertips), `j`
/// the jaw (closing) axis, `k = a × j`. The fingertips reach `tip_offset`
/// past the grasp center; each finger is `finger_depth` long along `a`,
/// `finger_thickness` along `j` and `finger_width` along `k`. The palm sits
/// directly behind the fingers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GripperModel {
    pub max_opening: f64,
    pub finger_width: f64,
    pub finger_depth: f64,
    pub finger_thickness: f64,
    pub tip_offset: f64,
    pub palm_width: f64,
    pub palm_span: f64,
    pub palm_depth: f64,
    /// Clearance between a finger's inner face and the contact plane.
    pub contact_tolerance: f64,
}

impl Default for GripperModel {
    fn default() -> Self {
        GripperModel {
            max_opening: 0.085,
            finger_width: 0.022,
            finger_depth: 0.038,
            finger_thickness: 0.010,
            tip_offset: 0.005,
            palm_width: 0.060,
            palm_span: 0.110,
            palm_depth: 0.040,
            contact_tolerance: 0.001,
        }
    }
}

impl GripperModel {
    pub fn validate(&self) -> Result<()> {
        let dims = [
            self.max_opening,
            self.finger_width,
            self.finger_depth,
            self.finger_thickness,
            self.palm_width,
            self.palm_span,
            self.palm_depth,
        ];
        if dims.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
            return Err(Error::Config("gripper dimensions must be positive".into()));
        }
        if !(self.contact_tolerance >= 0.0) || self.max_opening <= 2.0 * self.contact_tolerance {
            return Err(Error::Config("max_opening must exceed twice the contact tolerance".into()));
        }
        if !(0.0..=self.finger_depth).contains(&self.tip_offset) {
            return Err(Error::Config("tip_offset must lie within the finger depth".into()));
        }
        Ok(())
    }

    /// Finger and palm boxes for a grasp, in the grasp's frame of reference.
    pub fn boxes(&self, grasp: &Grasp) -> [OrientedBox; 3] {
        let a = grasp.approach;
        let j = grasp.jaw_axis;
        let k = a.cross(&j);
        let axes = [a, j, k];
        let finger_mid = self.tip_offset - 0.5 * self.finger_depth;
        let side = 0.5 * grasp.opening + self.contact_tolerance + 0.5 * self.finger_thickness;
        let finger_half = [0.5 * self.finger_depth, 0.5 * self.finger_thickness, 0.5 * self.finger_width];
        let finger = |s: f64| OrientedBox {
            center: grasp.center + a * finger_mid + j * (s * side),
            axes,
            half: finger_half,
        };
        let palm_back = self.tip_offset - self.finger_depth;
        let palm = OrientedBox {
            center: grasp.center + a * (palm_back - 0.5 * self.palm_depth),
            axes,
            half: [0.5 * self.palm_depth, 0.5 * self.palm_span, 0.5 * self.palm_width],
        };
        [finger(1.0), finger(-1.0), palm]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grasp {
    pub id: usize,
    /// Midpoint between the two contacts (object frame).
    pub center: Point3<f64>,
    /// Closing direction; points from the center toward the first contact.
    pub jaw_axis: Vector3<f64>,
    pub approach: Vector3<f64>,
    pub opening: f64,
    /// Flat regions touched by the first and second finger.
    pub regions: [usize; 2],
    /// Outward normals of the two contact faces.
    pub normals: [Vector3<f64>; 2],
}

impl Grasp {
    pub fn contacts(&self) -> [Point3<f64>; 2] {
        let h = self.jaw_axis * (0.5 * self.opening);
        [self.center + h, self.center - h]
    }

    /// Hand-to-object transform; hand axes are (approach, jaw, approach × jaw).
    pub fn hand_pose(&self) -> Pose {
        let k = self.approach.cross(&self.jaw_axis);
        let m = Matrix3::from_columns(&[self.approach, self.jaw_axis, k]);
        Pose::new(Rotation3::from_matrix_unchecked(m), self.center.coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_grasp() -> Grasp {
        Grasp {
            id: 0,
            center: Point3::origin(),
            jaw_axis: Vector3::y(),
            approach: -Vector3::z(),
            opening: 0.04,
            regions: [0, 1],
            normals: [Vector3::y(), -Vector3::y()],
        }
    }

    #[test]
    fn boxes_bracket_the_contacts() {
        let g = GripperModel { tip_offset: 0.010, ..GripperModel::default() };
        let [f1, f2, palm] = g.boxes(&sample_grasp());
        let inner = |b: &OrientedBox| b.center.y.abs() - b.half[1];
        assert!((inner(&f1) - 0.021).abs() < 1e-12 && (inner(&f2) - 0.021).abs() < 1e-12);
        // Approach is -z: fingertips 1 cm below the center, palm above.
        assert!((f1.center.z - f1.half[0] + 0.010).abs() < 1e-12);
        assert!((palm.center.z - palm.half[0] - 0.028).abs() < 1e-12);
        // Default: fingertips 5 mm past the center.
        let [f, _, palm] = GripperModel::default().boxes(&sample_grasp());
        assert!((f.center.z - f.half[0] + 0.005).abs() < 1e-12);
        assert!((palm.center.z - palm.half[0] - 0.033).abs() < 1e-12);
    }

    #[test]
    fn hand_pose_is_rotation() {
        let p = sample_grasp().hand_pose();
        assert!((p.rotation.matrix().determinant() - 1.0).abs() < 1e-12);
        assert!((p.transform_vector(&Vector3::x()) + Vector3::z()).norm() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(GripperModel::default().validate().is_ok());
        let bad = GripperModel { max_opening: 0.001, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
