use nalgebra::{Point3, Vector3};
use serde::{Deserialize, Serialize};

use super::mesh::Mesh;
use crate::error::{Error, Result};

/// Volume and center of mass of a solid with uniform density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassProperties {
    pub volume: f64,
    pub center_of_mass: Point3<f64>,
}

/// Integrates signed tetrahedra spanned by each triangle and the origin.
pub fn mass_properties(mesh: &Mesh) -> Result<MassProperties> {
    // Shift to the first vertex to keep the tetrahedra small for far-away meshes.
    let origin = mesh.vertices()[0].coords;
    let mut volume = 0.0;
    let mut moment = Vector3::zeros();
    for t in mesh.triangles() {
        let a = mesh.vertices()[t[0]].coords - origin;
        let b = mesh.vertices()[t[1]].coords - origin;
        let c = mesh.vertices()[t[2]].coords - origin;
        let v = a.dot(&b.cross(&c)) / 6.0;
        volume += v;
        moment += v * (a + b + c) / 4.0;
    }
    if !(volume > 0.0) {
        return Err(Error::NonPositiveVolume(volume));
    }
    Ok(MassProperties {
        volume,
        center_of_mass: Point3::from(moment / volume + origin),
    })
}
