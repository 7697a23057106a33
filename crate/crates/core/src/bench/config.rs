use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Pose;
use crate::grasp::GripperModel;
use crate::graph::{FeasibilityOracle, PlanMode};

/// Spherical-shell reach with a tilt limit on the approach direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReachabilityModel {
    pub base: [f64; 3],
    pub r_min: f64,
    pub r_max: f64,
    /// Largest angle between the approach direction and straight down, radians.
    pub max_tilt: f64,
}

impl Default for ReachabilityModel {
    fn default() -> Self {
        ReachabilityModel {
            base: [0.0, 0.0, 0.35],
            r_min: 0.15,
            r_max: 0.81,
            max_tilt: 60f64.to_radians(),
        }
    }
}

impl ReachabilityModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max.is_finite()) {
            return Err(Error::Config("reachability needs 0 < r_min < r_max".into()));
        }
        if !(self.max_tilt >= 0.0) {
            return Err(Error::Config("max_tilt must be non-negative".into()));
        }
        Ok(())
    }
}

impl FeasibilityOracle for ReachabilityModel {
    fn feasible(&self, hand_pose: &Pose) -> bool {
        let r = (hand_pose.translation - Vector3::from(self.base)).norm();
        if r < self.r_min || r > self.r_max {
            return false;
        }
        let approach = hand_pose.rotation * Vector3::x();
        approach.angle(&-Vector3::z()) <= self.max_tilt
    }
}

/// Reorientation benchmark settings. Lengths in meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    /// Workspace extent (x, y).
    pub workspace: [f64; 2],
    /// Lower-left corner of the workspace.
    pub workspace_origin: [f64; 2],
    pub grid_cell: f64,
    /// Corner lattice (columns, rows); derived from the workspace when absent.
    pub corners: Option<[usize; 2]>,
    pub trials_per_corner: usize,
    pub pin_length: f64,
    pub density: usize,
    /// Pin and intermediate placement location relative to each corner.
    pub intermediate_offset: [f64; 2],
    pub rng_seed: u64,
    pub mode: PlanMode,
    /// Uniform scale applied about the center of mass.
    pub object_scale: f64,
    pub mu: f64,
    pub sample_step: f64,
    pub path_budget: usize,
    pub gripper: GripperModel,
    pub reach: ReachabilityModel,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            workspace: [0.8, 0.6],
            workspace_origin: [-0.4, -0.7],
            grid_cell: 0.04,
            corners: None,
            trials_per_corner: 10,
            pin_length: 0.03,
            density: 8,
            intermediate_offset: [-0.2, 0.0],
            rng_seed: 0,
            mode: PlanMode::PinPlanar,
            object_scale: 1.0,
            mu: 0.5,
            sample_step: crate::geometry::DEFAULT_SAMPLE_STEP,
            path_budget: 20,
            gripper: GripperModel::default(),
            reach: ReachabilityModel::default(),
        }
    }
}

impl BenchConfig {
    /// A 6 × 5 corner lattice of 4 cm cells in front of the robot, 3 trials
    /// per corner.
    pub fn desk() -> BenchConfig {
        BenchConfig {
            workspace: [0.2, 0.16],
            workspace_origin: [-0.1, -0.5],
            trials_per_corner: 3,
            ..BenchConfig::default()
        }
    }

    pub fn from_toml(text: &str) -> Result<BenchConfig> {
        let cfg: BenchConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<BenchConfig> {
        let cfg: BenchConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads TOML or JSON by extension (`.json` is JSON, anything else TOML).
    pub fn load(path: &Path) -> Result<BenchConfig> {
        let text = std::fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json(&text),
            _ => Self::from_toml(&text),
        }
    }

    /// Cells per axis when the workspace divides evenly.
    fn cells(&self) -> Result<[usize; 2]> {
        let mut out = [0; 2];
        for k in 0..2 {
            let ratio = self.workspace[k] / self.grid_cell;
            let rounded = ratio.round();
            if !(ratio.is_finite() && rounded >= 1.0 && (ratio - rounded).abs() <= 1e-6 * rounded) {
                return Err(Error::Config(format!(
                    "workspace {} m does not divide into {} m cells",
                    self.workspace[k], self.grid_cell
                )));
            }
            out[k] = rounded as usize;
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(self.grid_cell > 0.0) || self.workspace.iter().any(|w| !(*w > 0.0)) {
            return bad("workspace and grid_cell must be positive");
        }
        self.cells()?;
        if let Some(c) = self.corners {
            if c[0] == 0 || c[1] == 0 {
                return bad("corner lattice must be non-empty");
            }
        }
        if self.trials_per_corner == 0 {
            return bad("trials_per_corner must be at least 1");
        }
        if !(self.pin_length >= 0.0 && self.pin_length.is_finite()) {
            return bad("pin_length must be a finite non-negative length");
        }
        if self.density == 0 {
            return bad("density must be at least 1");
        }
        if !(self.object_scale > 0.0 && self.object_scale.is_finite()) {
            return bad("object_scale must be positive");
        }
        if !(self.mu > 0.0) || !(self.sample_step > 0.0) {
            return bad("mu and sample_step must be positive");
        }
        if self.path_budget == 0 {
            return bad("path_budget must be at least 1");
        }
        self.gripper.validate()?;
        self.reach.validate()
    }

    /// Corner lattice size (columns, rows).
    pub fn lattice(&self) -> Result<[usize; 2]> {
        match self.corners {
            Some(c) => Ok(c),
            None => self.cells().map(|c| [c[0] + 1, c[1] + 1]),
        }
    }

    /// World position of corner (column, row).
    pub fn corner_xy(&self, col: usize, row: usize) -> [f64; 2] {
        [
            self.workspace_origin[0] + col as f64 * self.grid_cell,
            self.workspace_origin[1] + row as f64 * self.grid_cell,
        ]
    }
}
