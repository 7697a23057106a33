//! Command-line front end: argument parsing, caching and output plumbing
//! around the `pinregrasp` library.
//!
//! Exit codes: 0 on success (including a plan that is infeasible), 1 on a
//! pipeline error (with a JSON error object on stdout), 2 on a usage error.

pub mod cache;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use pinregrasp::bench::{
    run_reorientation_benchmark, sweep, write_report_dir, BenchConfig, BenchReport, SweepAxis,
};
use pinregrasp::geometry::{load_mesh_file, Mesh, Pose, DEFAULT_SAMPLE_STEP};
use pinregrasp::grasp::{GraspSet, GripperModel};
use pinregrasp::graph::{plan_regrasp, FeasibilityOracle, PlanMode, PlanQuery, PlanResult, SearchLimits};
use pinregrasp::pipeline::{GraphDocument, PipelineParams, PreparedObject};
use pinregrasp::placement::{compute_placements, PlacementParams, PlacementSet};
use pinregrasp::{shapes, Error, Result};
use serde::Serialize;

use cache::{cache_key, Cache};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pinregrasp", version, about = "Placements on a plane and a support pin, grasps, and regrasp plans")]
pub struct Cli {
    /// Overrides the benchmark seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for cached placement and grasp sets.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate planar and pin placements.
    Placements(PlacementArgs),
    /// Enumerate the object's total grasp set.
    Grasps(GraspArgs),
    /// Build the regrasp graph.
    Graph(GraphArgs),
    /// Plan a reorientation between two resting poses.
    Plan(PlanArgs),
    /// Run the randomized reorientation benchmark.
    Bench(BenchArgs),
    /// Run the benchmark once per value of one parameter.
    Sweep(SweepArgs),
}

/// A mesh file (STL or OBJ) or `builtin:NAME`.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshSource {
    File(PathBuf),
    Builtin(String),
}

impl FromStr for MeshSource {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.strip_prefix("builtin:") {
            Some(name) if shapes::builtin(name).is_some() => Ok(MeshSource::Builtin(name.to_string())),
            Some(name) => Err(format!("unknown built-in mesh {name:?}")),
            None if s.is_empty() => Err("empty mesh path".into()),
            None => Ok(MeshSource::File(PathBuf::from(s))),
        }
    }
}

impl MeshSource {
    pub fn load(&self) -> Result<Mesh> {
        match self {
            MeshSource::File(p) => load_mesh_file(p),
            MeshSource::Builtin(name) => {
                shapes::builtin(name).ok_or_else(|| Error::Config(format!("unknown built-in mesh {name:?}")))
            }
        }
    }
}

/// A resting pose on the CLI: planar placement index, floor position, yaw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseArg {
    pub placement: usize,
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
}

fn floats<const N: usize>(s: &str) -> std::result::Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse::<f64>().map_err(|e| format!("{p:?}: {e}"))?;
        if !o.is_finite() {
            return Err(format!("{p:?} is not finite"));
        }
    }
    Ok(out)
}

impl FromStr for PoseArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (idx, rest) = s.split_once(',').ok_or_else(|| format!("expected INDEX,X,Y,YAW, got {s:?}"))?;
        let placement = idx.trim().parse::<usize>().map_err(|e| format!("placement index {idx:?}: {e}"))?;
        let [x, y, yaw] = floats::<3>(rest)?;
        Ok(PoseArg { placement, x, y, yaw })
    }
}

/// `X,Y` in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Xy(pub [f64; 2]);

impl FromStr for Xy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        floats::<2>(s).map(Xy)
    }
}

fn parse_mode(s: &str) -> std::result::Result<PlanMode, String> {
    match s {
        "planar" | "planar-only" => Ok(PlanMode::PlanarOnly),
        "pin" | "pin-planar" => Ok(PlanMode::PinPlanar),
        other => Err(format!("mode must be planar or pin, got {other:?}")),
    }
}

fn parse_axis(s: &str) -> std::result::Result<SweepAxis, String> {
    s.parse::<SweepAxis>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct MeshArgs {
    /// Mesh file (STL/OBJ) or builtin:NAME (cube, cube3, tetrahedron, l, cross, pot_lid).
    #[arg(long)]
    pub mesh: MeshSource,
}

#[derive(Debug, Clone, Args)]
pub struct PlacementOpts {
    /// Pin length in meters.
    #[arg(long, default_value_t = 0.03)]
    pub pin_length: f64,
    /// Friction coefficient.
    #[arg(long, default_value_t = 0.5)]
    pub mu: f64,
    /// Surface sampling step in meters.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_STEP)]
    pub sample_step: f64,
}

impl PlacementOpts {
    fn params(&self, planar_only: bool) -> PlacementParams {
        PlacementParams {
            pin_length: self.pin_length,
            mu: self.mu,
            sample_step: self.sample_step,
            planar_only,
            ..PlacementParams::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PlacementArgs {
    #[command(flatten)]
    pub mesh: MeshArgs,
    #[command(flatten)]
    pub opts: PlacementOpts,
    /// Skip pin placements.
    #[arg(long)]
    pub planar_only: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GraspArgs {
    #[command(flatten)]
    pub mesh: MeshArgs,
    /// Approach directions per opposed face pair.
    #[arg(long, default_value_t = 8)]
    pub density: usize,
    /// Friction coefficient for force closure.
    #[arg(long, default_value_t = 0.5)]
    pub mu: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ObjectArgs {
    #[command(flatten)]
    pub mesh: MeshArgs,
    #[command(flatten)]
    pub opts: PlacementOpts,
    /// Approach directions per opposed face pair.
    #[arg(long, default_value_t = 8)]
    pub density: usize,
    /// Placement kinds in the graph: planar or pin (pin and planar).
    #[arg(long, value_parser = parse_mode, default_value = "pin")]
    pub mode: PlanMode,
}

impl ObjectArgs {
    fn pipeline(&self) -> PipelineParams {
        PipelineParams {
            placement: self.opts.params(!self.mode.uses_pin()),
            density: self.density,
            grasp_mu: self.opts.mu,
            ..PipelineParams::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    pub object: ObjectArgs,
    /// Also write the layer-1 graph in Graphviz DOT format.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub object: ObjectArgs,
    /// Start pose as PLACEMENT,X,Y,YAW (planar placement index, meters, radians).
    #[arg(long)]
    pub init_pose: PoseArg,
    /// Goal pose as PLACEMENT,X,Y,YAW.
    #[arg(long)]
    pub goal_pose: PoseArg,
    /// Pin (and intermediate placement) location X,Y.
    #[arg(long, allow_hyphen_values = true)]
    pub pin_at: Xy,
    /// Placement paths to try before giving up.
    #[arg(long, default_value_t = 20)]
    pub path_budget: usize,
    /// Accept every hand pose instead of the default reachability model.
    #[arg(long)]
    pub ignore_reach: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub mesh: MeshArgs,
    /// Benchmark configuration (TOML, or JSON by extension); defaults otherwise.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory for report.json, report.csv, heatmap.svg, manifest.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub mesh: MeshArgs,
    /// Base benchmark configuration shared by every run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// pin-length, scale or density.
    #[arg(long, value_parser = parse_axis)]
    pub axis: SweepAxis,
    /// Values to sweep, space- or comma-separated.
    #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
    pub values: Vec<f64>,
    /// One subdirectory per value is written here.
    #[arg(long)]
    pub out: PathBuf,
}

/// Everything a subcommand prints on success.
struct Output {
    stdout: String,
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Parses `argv` (including the program name), runs the command and writes
/// its output to `out`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if e.use_stderr() {
                let _ = write!(std::io::stderr(), "{}", e.render());
            } else {
                let _ = write!(out, "{}", e.render());
            }
            return code;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Error::Config("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))
            .and_then(|pool| pool.install(|| execute(&cli))),
        None => execute(&cli),
    };
    match result {
        Ok(o) => match out.write_all(o.stdout.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(_) => EXIT_FAILURE,
        },
        Err(e) => {
            let _ = out.write_all(error_json(&e).as_bytes());
            EXIT_FAILURE
        }
    }
}

/// `{"error": {"kind": ..., "message": ...}}` plus a newline.
pub fn error_json(e: &Error) -> String {
    let v = serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
    format!("{}\n", serde_json::to_string_pretty(&v).expect("static shape"))
}

fn execute(cli: &Cli) -> Result<Output> {
    let cache = Cache::new(cli.cache_dir.clone());
    let stdout = match &cli.command {
        Command::Placements(a) => {
            let mesh = a.mesh.mesh.load()?;
            cached_placements(&cache, &mesh, &a.opts.params(a.planar_only))?.to_json()? + "\n"
        }
        Command::Grasps(a) => {
            let mesh = a.mesh.mesh.load()?;
            cached_grasps(&cache, &mesh, &GripperModel::default(), a.density, a.mu)?.to_json()? + "\n"
        }
        Command::Graph(a) => {
            let mesh = a.object.mesh.mesh.load()?;
            let obj = prepared(&cache, &mesh, &a.object.pipeline())?;
            let doc = GraphDocument::new(&obj, a.object.mode);
            if let Some(path) = &a.dot {
                let labels = obj.labels();
                std::fs::write(path, doc.graph.to_dot(&labels))?;
            }
            json(&doc)?
        }
        Command::Plan(a) => json(&run_plan(&cache, a)?)?,
        Command::Bench(a) => {
            let mesh = a.mesh.mesh.load()?;
            let config = bench_config(a.config.as_deref(), cli.seed)?;
            let report = run_reorientation_benchmark(&mesh, &config, &config.reach)?;
            let files = write_report_dir(&report, &a.out)?;
            json(&summary(&report, &a.out, &files))?
        }
        Command::Sweep(a) => {
            let mesh = a.mesh.mesh.load()?;
            let config = bench_config(a.config.as_deref(), cli.seed)?;
            let reports = sweep(&mesh, &config, &config.reach, a.axis, &a.values)?;
            let mut rows = Vec::new();
            for (value, report) in a.values.iter().zip(&reports) {
                let dir = a.out.join(format!("{}-{value}", axis_name(a.axis)));
                let files = write_report_dir(report, &dir)?;
                rows.push(SweepRow { value: *value, summary: summary(report, &dir, &files) });
            }
            json(&rows)?
        }
    };
    Ok(Output { stdout })
}

fn axis_name(axis: SweepAxis) -> &'static str {
    match axis {
        SweepAxis::PinLength => "pin-length",
        SweepAxis::ObjectScale => "scale",
        SweepAxis::Density => "density",
    }
}

/// Placement set through the cache.
pub fn cached_placements(cache: &Cache, mesh: &Mesh, params: &PlacementParams) -> Result<PlacementSet> {
    let key = cache_key("placements", &mesh.content_hash(), params)?;
    cache.get_or("placements", &key, || compute_placements(mesh, params))
}

/// Total grasp set through the cache.
pub fn cached_grasps(cache: &Cache, mesh: &Mesh, gripper: &GripperModel, density: usize, mu: f64) -> Result<GraspSet> {
    let key = cache_key("grasps", &mesh.content_hash(), &(gripper, density, mu))?;
    cache.get_or("grasps", &key, || GraspSet::compute(mesh, gripper, density, mu))
}

pub fn prepared(cache: &Cache, mesh: &Mesh, params: &PipelineParams) -> Result<PreparedObject> {
    let placements = cached_placements(cache, mesh, &params.placement)?;
    let grasps = cached_grasps(cache, mesh, &params.gripper, params.density, params.grasp_mu)?;
    Ok(PreparedObject::from_parts(placements, grasps, params))
}

struct AcceptAll;

impl FeasibilityOracle for AcceptAll {
    fn feasible(&self, _: &Pose) -> bool {
        true
    }
}

fn run_plan(cache: &Cache, a: &PlanArgs) -> Result<PlanResult> {
    let mesh = a.object.mesh.mesh.load()?;
    let obj = prepared(cache, &mesh, &a.object.pipeline())?;
    let pose = |p: &PoseArg| -> Result<Pose> {
        let planar = obj.placements.planar.get(p.placement).ok_or_else(|| {
            Error::Config(format!(
                "planar placement {} out of range ({} available)",
                p.placement,
                obj.placements.planar.len()
            ))
        })?;
        Ok(planar.pose_at(p.x, p.y, p.yaw))
    };
    let query = PlanQuery {
        init_pose: pose(&a.init_pose)?,
        goal_pose: pose(&a.goal_pose)?,
        pin_xy: a.pin_at.0,
        mode: a.object.mode,
    };
    if a.path_budget == 0 {
        return Err(Error::Config("--path-budget must be at least 1".into()));
    }
    let limits = SearchLimits { path_budget: a.path_budget, ..SearchLimits::default() };
    let reach = pinregrasp::bench::ReachabilityModel::default();
    let oracle: &dyn FeasibilityOracle = if a.ignore_reach { &AcceptAll } else { &reach };
    plan_regrasp(&obj.placements, &obj.grasps.grasps, &obj.assoc, &query, oracle, &limits)
}

/// Loads the configuration (or defaults) and applies a `--seed` override.
pub fn bench_config(path: Option<&Path>, seed: Option<u64>) -> Result<BenchConfig> {
    let mut config = match path {
        Some(p) => BenchConfig::load(p)?,
        None => BenchConfig::default(),
    };
    if let Some(s) = seed {
        config.rng_seed = s;
    }
    config.validate()?;
    Ok(config)
}

#[derive(Debug, Serialize)]
struct BenchSummary {
    out: String,
    files: Vec<String>,
    trials: usize,
    success_rate: f64,
    mean_length: Option<f64>,
    planar_placements: usize,
    pin_placements: usize,
    grasps: usize,
}

#[derive(Debug, Serialize)]
struct SweepRow {
    value: f64,
    #[serde(flatten)]
    summary: BenchSummary,
}

fn summary(report: &BenchReport, dir: &Path, files: &[PathBuf]) -> BenchSummary {
    BenchSummary {
        out: dir.display().to_string(),
        files: files
            .iter()
            .filter_map(|f| f.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect(),
        trials: report.trials.len(),
        success_rate: report.success_rate(),
        mean_length: report.mean_length(),
        planar_placements: report.planar_placements,
        pin_placements: report.pin_placements,
        grasps: report.grasps,
    }
}
