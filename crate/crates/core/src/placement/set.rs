use nalgebra::Point3;
use serde::{Deserialize, Serialize};

use super::pin::{enumerate_pin_placements, PinParams};
use super::planar::enumerate_planar_placements;
use super::{PinPlacement, Placement, PlanarPlacement};
use crate::error::{Error, Result};
use crate::geometry::regions::flat_regions;
use crate::geometry::sampling::sample_regions;
use crate::geometry::{convex_hull, mass_properties, Mesh, DEFAULT_SAMPLE_MARGIN, DEFAULT_SAMPLE_STEP};
use crate::tolerance::Tolerances;
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlacementParams {
    pub pin_length: f64,
    pub mu: f64,
    pub sample_step: f64,
    pub sample_margin: f64,
    pub pin_base_world: [f64; 2],
    /// Skip pin placements entirely.
    pub planar_only: bool,
    pub tolerances: Tolerances,
}

impl Default for PlacementParams {
    fn default() -> Self {
        PlacementParams {
            pin_length: 0.03,
            mu: 0.5,
            sample_step: DEFAULT_SAMPLE_STEP,
            sample_margin: DEFAULT_SAMPLE_MARGIN,
            pin_base_world: [0.0, 0.0],
            planar_only: false,
            tolerances: Tolerances::default(),
        }
    }
}

impl PlacementParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(self.pin_length >= 0.0 && self.pin_length.is_finite()) {
            return bad("pin_length must be a finite non-negative length");
        }
        if !(self.mu > 0.0) {
            return bad("mu must be positive");
        }
        if !(self.sample_step > 0.0) {
            return bad("sample_step must be positive");
        }
        if !(self.sample_margin >= 0.0) {
            return bad("sample_margin must be non-negative");
        }
        Ok(())
    }

    pub fn pin_params(&self) -> PinParams {
        PinParams { pin_length: self.pin_length, mu: self.mu, pin_base_world: self.pin_base_world }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub mesh_name: String,
    pub mesh_hash: String,
    pub sample_step: f64,
    pub sample_count: usize,
}

/// Planar placements come first and keep indices `0..planar.len()`; pin
/// placements follow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementSet {
    pub schema_version: u32,
    pub parameters: PlacementParams,
    pub provenance: Provenance,
    pub volume: f64,
    pub center_of_mass: Point3<f64>,
    pub planar: Vec<PlanarPlacement>,
    pub pin: Vec<PinPlacement>,
}

impl PlacementSet {
    pub fn len(&self) -> usize {
        self.planar.len() + self.pin.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Placement by combined index.
    pub fn get(&self, index: usize) -> Option<Placement> {
        if index < self.planar.len() {
            Some(Placement::Planar(self.planar[index].clone()))
        } else {
            self.pin.get(index - self.planar.len()).cloned().map(Placement::Pin)
        }
    }

    pub fn all(&self) -> Vec<Placement> {
        self.planar
            .iter()
            .cloned()
            .map(Placement::Planar)
            .chain(self.pin.iter().cloned().map(Placement::Pin))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Samples the surface and enumerates both placement kinds.
pub fn compute_placements(mesh: &Mesh, params: &PlacementParams) -> Result<PlacementSet> {
    params.validate()?;
    let tol = &params.tolerances;
    let hull = convex_hull(mesh)?;
    let mass = mass_properties(mesh)?;
    let com = mass.center_of_mass;
    let planar = enumerate_planar_placements(&hull, &com, tol.stability_margin);
    let regions = flat_regions(mesh, tol.region_angle);
    let samples = sample_regions(mesh, &regions, params.sample_step, params.sample_margin, tol);
    let pin = if params.planar_only {
        Vec::new()
    } else {
        enumerate_pin_placements(mesh, &hull, &com, &samples, &params.pin_params(), tol)
    };
    Ok(PlacementSet {
        schema_version: SCHEMA_VERSION,
        parameters: *params,
        provenance: Provenance {
            mesh_name: mesh.name().to_string(),
            mesh_hash: mesh.content_hash(),
            sample_step: params.sample_step,
            sample_count: samples.len(),
        },
        volume: mass.volume,
        center_of_mass: com,
        planar,
        pin,
    })
}
