use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{BenchConfig, ReachabilityModel};
use super::report::{Aggregate, BenchReport, Timings, TrialReport};
use crate::error::{Error, Result};
use crate::geometry::{mass_properties, Mesh};
use crate::graph::{plan_regrasp, FailureKind, PlanQuery, SearchLimits};
use crate::pipeline::{prepare, PipelineParams, PreparedObject};
use crate::placement::PlacementParams;
use crate::SCHEMA_VERSION;

/// Per-trial generator: one ChaCha8 stream per trial under the run seed.
pub fn trial_rng(seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}

/// Pipeline parameters implied by a benchmark configuration.
pub fn pipeline_params(config: &BenchConfig) -> PipelineParams {
    PipelineParams {
        placement: PlacementParams {
            pin_length: config.pin_length,
            mu: config.mu,
            sample_step: config.sample_step,
            planar_only: !config.mode.uses_pin(),
            ..PlacementParams::default()
        },
        gripper: config.gripper,
        density: config.density,
        grasp_mu: config.mu,
        torque: None,
    }
}

/// The mesh as used by a run: scaled about its center of mass.
pub fn scaled_mesh(mesh: &Mesh, scale: f64) -> Result<Mesh> {
    if scale == 1.0 {
        return Ok(mesh.clone());
    }
    let com = mass_properties(mesh)?.center_of_mass;
    Ok(mesh.scaled_about(&com, scale))
}

/// Randomized reorientation trials over the corner lattice.
///
/// Each trial draws start and goal planar placements and yaws, puts the pin
/// (and every intermediate placement) at the corner plus the configured
/// offset, and plans in the configured mode.
pub fn run_reorientation_benchmark(mesh: &Mesh, config: &BenchConfig, reach: &ReachabilityModel) -> Result<BenchReport> {
    config.validate()?;
    reach.validate()?;
    let mesh = scaled_mesh(mesh, config.object_scale)?;
    let build_start = Instant::now();
    let object = prepare(&mesh, &pipeline_params(config))?;
    let _graph = object.graph(config.mode);
    let graph_build = build_start.elapsed().as_secs_f64();
    if object.placements.planar.is_empty() {
        return Err(Error::Config("object has no stable planar placement".into()));
    }
    let [cols, rows] = config.lattice()?;
    let per = config.trials_per_corner;
    let count = cols * rows * per;
    let limits = SearchLimits { path_budget: config.path_budget, ..SearchLimits::default() };
    let results: Vec<(TrialReport, f64)> = (0..count)
        .into_par_iter()
        .map(|index| {
            let corner_index = index / per;
            let (row, col) = (corner_index / cols, corner_index % cols);
            run_trial(&object, config, reach, &limits, [col, row], index % per, index as u64)
        })
        .collect();
    let (trials, search): (Vec<TrialReport>, Vec<f64>) = results.into_iter().unzip();
    Ok(BenchReport {
        schema_version: SCHEMA_VERSION,
        library_version: env!("CARGO_PKG_VERSION").to_string(),
        mesh_name: mesh.name().to_string(),
        mesh_hash: mesh.content_hash(),
        config: config.clone(),
        planar_placements: object.placements.planar.len(),
        pin_placements: object.placements.pin.len(),
        grasps: object.grasps.grasps.len(),
        aggregate: Aggregate::from_trials(&trials),
        trials,
        timings: Timings { graph_build, graph_search: search },
    })
}

fn run_trial(
    object: &PreparedObject,
    config: &BenchConfig,
    reach: &ReachabilityModel,
    limits: &SearchLimits,
    corner: [usize; 2],
    trial: usize,
    trial_index: u64,
) -> (TrialReport, f64) {
    let start = Instant::now();
    let mut rng = trial_rng(config.rng_seed, trial_index);
    let planar = &object.placements.planar;
    let init = rng.random_range(0..planar.len());
    let goal = rng.random_range(0..planar.len());
    let init_yaw = rng.random::<f64>() * std::f64::consts::TAU;
    let goal_yaw = rng.random::<f64>() * std::f64::consts::TAU;
    let [x, y] = config.corner_xy(corner[0], corner[1]);
    let query = PlanQuery {
        init_pose: planar[init].pose_at(x, y, init_yaw),
        goal_pose: planar[goal].pose_at(x, y, goal_yaw),
        pin_xy: [x + config.intermediate_offset[0], y + config.intermediate_offset[1]],
        mode: config.mode,
    };
    let plan = plan_regrasp(
        &object.placements,
        &object.grasps.grasps,
        &object.assoc,
        &query,
        reach,
        limits,
    );
    let (success, regrasp_count, failure, path) = match plan {
        Ok(p) if p.feasible => (true, Some(p.regrasp_count), None, p.placement_path),
        Ok(p) => (false, None, p.failure, Vec::new()),
        Err(Error::NoMatchingPlacement) => (false, None, Some(FailureKind::NoPlacementMatch), Vec::new()),
        Err(_) => (false, None, Some(FailureKind::NoPlacementMatch), Vec::new()),
    };
    let report = TrialReport {
        corner,
        corner_xy: [x, y],
        trial,
        init_placement: init,
        goal_placement: goal,
        init_yaw,
        goal_yaw,
        success,
        regrasp_count,
        failure,
        placement_path: path,
    };
    // Clamp to the clock's resolution so a measured phase is never zero.
    (report, start.elapsed().as_secs_f64().max(1e-9))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    PinLength,
    #[serde(alias = "scale")]
    ObjectScale,
    Density,
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<SweepAxis> {
        match s {
            "pin-length" | "pin_length" => Ok(SweepAxis::PinLength),
            "scale" | "object-scale" | "object_scale" => Ok(SweepAxis::ObjectScale),
            "density" => Ok(SweepAxis::Density),
            other => Err(Error::Config(format!("unknown sweep axis {other:?}"))),
        }
    }
}

/// One report per value with everything else fixed; run `i` uses seed
/// `rng_seed + i`.
pub fn sweep(
    mesh: &Mesh,
    config: &BenchConfig,
    reach: &ReachabilityModel,
    axis: SweepAxis,
    values: &[f64],
) -> Result<Vec<BenchReport>> {
    if values.is_empty() {
        return Err(Error::Config("sweep needs at least one value".into()));
    }
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut cfg = config.clone();
            cfg.rng_seed = config.rng_seed.wrapping_add(i as u64);
            match axis {
                SweepAxis::PinLength => cfg.pin_length = v,
                SweepAxis::ObjectScale => cfg.object_scale = v,
                SweepAxis::Density => {
                    if !(v >= 1.0 && v.fract() == 0.0) {
                        return Err(Error::Config(format!("density must be a positive integer, got {v}")));
                    }
                    cfg.density = v as usize;
                }
            }
            run_reorientation_benchmark(mesh, &cfg, reach)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlanMode;
    use crate::shapes;

    fn tiny() -> BenchConfig {
        BenchConfig {
            workspace: [0.04, 0.04],
            workspace_origin: [0.0, -0.4],
            trials_per_corner: 2,
            ..BenchConfig::default()
        }
    }

    #[test]
    fn trial_streams_are_independent() {
        let a: u64 = trial_rng(1, 0).random();
        let b: u64 = trial_rng(1, 1).random();
        let c: u64 = trial_rng(1, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn cube_bench_shape_and_determinism() {
        let cube = shapes::cuboid(0.03, 0.03, 0.03);
        let cfg = tiny();
        let r1 = run_reorientation_benchmark(&cube, &cfg, &cfg.reach).unwrap();
        let r2 = run_reorientation_benchmark(&cube, &cfg, &cfg.reach).unwrap();
        assert_eq!(r1.trials.len(), 2 * 2 * 2);
        assert_eq!(serde_json::to_string(&r1).unwrap(), serde_json::to_string(&r2).unwrap());
        assert_eq!(r1.aggregate, Aggregate::from_trials(&r1.trials));
        assert!(r1.timings.graph_build > 0.0 && r1.timings.graph_search.iter().all(|&t| t > 0.0));
    }

    #[test]
    fn sweep_seeds_and_values() {
        let cube = shapes::cuboid(0.03, 0.03, 0.03);
        let cfg = BenchConfig { mode: PlanMode::PlanarOnly, ..tiny() };
        let out = sweep(&cube, &cfg, &cfg.reach, SweepAxis::Density, &[2.0, 4.0]).unwrap();
        assert_eq!(out[0].config.density, 2);
        assert_eq!(out[1].config.rng_seed, cfg.rng_seed + 1);
        assert!(sweep(&cube, &cfg, &cfg.reach, SweepAxis::Density, &[]).is_err());
        assert!(sweep(&cube, &cfg, &cfg.reach, SweepAxis::Density, &[2.5]).is_err());
    }
}
