use nalgebra::{Matrix3, Point3, Rotation3, Vector3};
use serde::{Deserialize, Serialize};

/// Rigid transform `p ↦ R p + t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "PoseRepr", into = "PoseRepr")]
pub struct Pose {
    pub rotation: Rotation3<f64>,
    pub translation: Vector3<f64>,
}

/// Row-major 3×3 rotation plus translation, the on-disk form of a [`Pose`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct PoseRepr {
    rotation: [[f64; 3]; 3],
    translation: [f64; 3],
}

impl From<PoseRepr> for Pose {
    fn from(r: PoseRepr) -> Self {
        let m = Matrix3::from_fn(|i, j| r.rotation[i][j]);
        Pose {
            rotation: Rotation3::from_matrix_unchecked(m),
            translation: Vector3::from(r.translation),
        }
    }
}

impl From<Pose> for PoseRepr {
    fn from(p: Pose) -> Self {
        let m = p.rotation.matrix();
        PoseRepr {
            rotation: [
                [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
                [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
                [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
            ],
            translation: [p.translation.x, p.translation.y, p.translation.z],
        }
    }
}

impl Default for Pose {
    fn default() -> Self {
        Self::identity()
    }
}

impl Pose {
    pub fn identity() -> Self {
        Pose {
            rotation: Rotation3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn new(rotation: Rotation3<f64>, translation: Vector3<f64>) -> Self {
        Pose {
            rotation,
            translation,
        }
    }

    /// Builds a rotation whose rows are the given orthonormal axes, i.e. the
    /// rotation that maps `x_axis` to +X, `y_axis` to +Y and `z_axis` to +Z.
    pub fn from_rows(x_axis: &Vector3<f64>, y_axis: &Vector3<f64>, z_axis: &Vector3<f64>) -> Rotation3<f64> {
        let m = Matrix3::from_rows(&[x_axis.transpose(), y_axis.transpose(), z_axis.transpose()]);
        Rotation3::from_matrix_unchecked(m)
    }

    /// Rotation about world +Z by `yaw` followed by a translation in the floor plane.
    pub fn planar(x: f64, y: f64, yaw: f64) -> Self {
        Pose {
            rotation: Rotation3::from_axis_angle(&Vector3::z_axis(), yaw),
            translation: Vector3::new(x, y, 0.0),
        }
    }

    pub fn transform_point(&self, p: &Point3<f64>) -> Point3<f64> {
        self.rotation * p + self.translation
    }

    pub fn transform_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * v
    }

    pub fn inverse(&self) -> Pose {
        let r = self.rotation.inverse();
        Pose {
            rotation: r,
            translation: -(r * self.translation),
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn then_after(&self, other: &Pose) -> Pose {
        Pose {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    /// Angle of the relative rotation between two poses.
    pub fn rotation_distance(&self, other: &Pose) -> f64 {
        (self.rotation.inverse() * other.rotation).angle()
    }
}
