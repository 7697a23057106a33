use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::BenchConfig;
use crate::error::{Error, Result};
use crate::graph::FailureKind;
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    /// Corner (column, row).
    pub corner: [usize; 2],
    pub corner_xy: [f64; 2],
    pub trial: usize,
    pub init_placement: usize,
    pub goal_placement: usize,
    pub init_yaw: f64,
    pub goal_yaw: f64,
    pub success: bool,
    pub regrasp_count: Option<usize>,
    pub failure: Option<FailureKind>,
    pub placement_path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerStats {
    pub corner: [usize; 2],
    pub corner_xy: [f64; 2],
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Mean regrasp count over successful trials.
    pub mean_length: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Mean regrasp count over successful trials only.
    pub mean_length: Option<f64>,
    pub failures: BTreeMap<String, usize>,
    pub corners: Vec<CornerStats>,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

impl Aggregate {
    /// Statistics recomputed from trial rows; corners in (row, column) order.
    pub fn from_trials(trials: &[TrialReport]) -> Aggregate {
        let successes = trials.iter().filter(|t| t.success).count();
        let mut failures = BTreeMap::new();
        for t in trials {
            if let Some(kind) = t.failure {
                let key = serde_json::to_value(kind)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default();
                *failures.entry(key).or_insert(0) += 1;
            }
        }
        let mut by_corner: BTreeMap<[usize; 2], Vec<&TrialReport>> = BTreeMap::new();
        for t in trials {
            by_corner.entry([t.corner[1], t.corner[0]]).or_default().push(t);
        }
        let corners = by_corner
            .into_values()
            .map(|rows| {
                let ok = rows.iter().filter(|t| t.success).count();
                CornerStats {
                    corner: rows[0].corner,
                    corner_xy: rows[0].corner_xy,
                    trials: rows.len(),
                    successes: ok,
                    success_rate: ok as f64 / rows.len() as f64,
                    mean_length: mean(rows.iter().filter_map(|t| t.regrasp_count).map(|c| c as f64)),
                }
            })
            .collect();
        Aggregate {
            trials: trials.len(),
            successes,
            success_rate: if trials.is_empty() { 0.0 } else { successes as f64 / trials.len() as f64 },
            mean_length: mean(trials.iter().filter_map(|t| t.regrasp_count).map(|c| c as f64)),
            failures,
            corners,
        }
    }
}

/// Wall-clock phase timings, seconds. Kept out of the report document so
/// that reports stay byte-identical across runs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    /// Placement, grasp association and graph construction, once per run.
    pub graph_build: f64,
    /// Per-trial planning time, in trial order.
    pub graph_search: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSummary {
    pub mean: f64,
    pub p95: f64,
}

impl Timings {
    pub fn search_summary(&self) -> PhaseSummary {
        let mut v = self.graph_search.clone();
        v.sort_by(f64::total_cmp);
        let mean = mean(v.iter().copied()).unwrap_or(0.0);
        let p95 = if v.is_empty() {
            0.0
        } else {
            let rank = (0.95 * v.len() as f64).ceil() as usize;
            v[rank.clamp(1, v.len()) - 1]
        };
        PhaseSummary { mean, p95 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub library_version: String,
    pub mesh_name: String,
    pub mesh_hash: String,
    pub config: BenchConfig,
    pub planar_placements: usize,
    pub pin_placements: usize,
    pub grasps: usize,
    /// Trial rows ordered by (corner row, corner column, trial).
    pub trials: Vec<TrialReport>,
    pub aggregate: Aggregate,
    #[serde(skip)]
    pub timings: Timings,
}

impl BenchReport {
    pub fn success_rate(&self) -> f64 {
        self.aggregate.success_rate
    }

    pub fn mean_length(&self) -> Option<f64> {
        self.aggregate.mean_length
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Svg,
}

/// Serializes a report: full JSON, one CSV row per corner, or an SVG heat
/// map of per-corner success (red for 0, blue for 1).
pub fn emit_report(report: &BenchReport, format: ReportFormat) -> Result<Vec<u8>> {
    if report.trials.is_empty() {
        return Err(Error::EmptyReport("report has no trials".into()));
    }
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::Svg => Ok(emit_svg(report).into_bytes()),
    }
}

fn emit_csv(report: &BenchReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["column", "row", "x", "y", "trials", "successes", "success_rate", "mean_length"])
        .map_err(io)?;
    for c in &report.aggregate.corners {
        w.write_record([
            c.corner[0].to_string(),
            c.corner[1].to_string(),
            format!("{:.4}", c.corner_xy[0]),
            format!("{:.4}", c.corner_xy[1]),
            c.trials.to_string(),
            c.successes.to_string(),
            format!("{:.4}", c.success_rate),
            c.mean_length.map(|m| format!("{m:.4}")).unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

/// Linear red-to-blue ramp.
pub fn heat_color(rate: f64) -> String {
    let t = rate.clamp(0.0, 1.0);
    let r = (255.0 * (1.0 - t)).round() as u8;
    let b = (255.0 * t).round() as u8;
    format!("#{r:02x}00{b:02x}")
}

fn emit_svg(report: &BenchReport) -> String {
    const PX_PER_M: f64 = 1000.0;
    const PAD: f64 = 20.0;
    let cfg = &report.config;
    let [ox, oy] = cfg.workspace_origin;
    let corners = &report.aggregate.corners;
    let max_x = corners.iter().map(|c| c.corner_xy[0]).fold(ox + cfg.workspace[0], f64::max);
    let max_y = corners.iter().map(|c| c.corner_xy[1]).fold(oy + cfg.workspace[1], f64::max);
    let width = (max_x - ox) * PX_PER_M + 2.0 * PAD;
    let height = (max_y - oy) * PX_PER_M + 2.0 * PAD;
    // World +y points up on the page.
    let px = |x: f64| PAD + (x - ox) * PX_PER_M;
    let py = |y: f64| height - PAD - (y - oy) * PX_PER_M;
    let cell = cfg.grid_cell * PX_PER_M;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.1}\" height=\"{height:.1}\" viewBox=\"0 0 {width:.1} {height:.1}\">"
    );
    let _ = writeln!(
        s,
        "  <rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"#444\"/>",
        px(ox),
        py(oy + cfg.workspace[1]),
        cfg.workspace[0] * PX_PER_M,
        cfg.workspace[1] * PX_PER_M
    );
    for c in corners {
        let _ = writeln!(
            s,
            "  <rect class=\"corner\" x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"{}\"><title>{} {} {:.3}</title></rect>",
            px(c.corner_xy[0]) - cell / 2.0,
            py(c.corner_xy[1]) - cell / 2.0,
            cell,
            cell,
            heat_color(c.success_rate),
            c.corner[0],
            c.corner[1],
            c.success_rate
        );
    }
    s.push_str("</svg>\n");
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub library_version: String,
    pub schema_version: u32,
    pub mesh_hash: String,
    pub config: BenchConfig,
    pub files: Vec<String>,
    /// How mean sequence length is computed.
    pub mean_length_convention: String,
    pub graph_build_seconds: f64,
    pub graph_search_seconds: PhaseSummary,
    pub generated_unix_seconds: u64,
}

/// Writes `report.json`, `report.csv`, `heatmap.svg` and `manifest.json`
/// into `dir`. Only the manifest carries timings and a timestamp.
pub fn write_report_dir(report: &BenchReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let outputs = [
        ("report.json", ReportFormat::Json),
        ("report.csv", ReportFormat::Csv),
        ("heatmap.svg", ReportFormat::Svg),
    ];
    let mut written = Vec::new();
    for (name, format) in outputs {
        let path = dir.join(name);
        std::fs::write(&path, emit_report(report, format)?)?;
        written.push(path);
    }
    let manifest = Manifest {
        library_version: env!("CARGO_PKG_VERSION").to_string(),
        schema_version: SCHEMA_VERSION,
        mesh_hash: report.mesh_hash.clone(),
        config: report.config.clone(),
        files: outputs.iter().map(|(n, _)| n.to_string()).collect(),
        mean_length_convention: "mean regrasp_count over successful trials; failures excluded".into(),
        graph_build_seconds: report.timings.graph_build,
        graph_search_seconds: report.timings.search_summary(),
        generated_unix_seconds: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    let path = dir.join("manifest.json");
    let mut bytes = serde_json::to_vec_pretty(&manifest)?;
    bytes.push(b'\n');
    std::fs::write(&path, bytes)?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(col: usize, row: usize, success: bool, len: usize) -> TrialReport {
        TrialReport {
            corner: [col, row],
            corner_xy: [col as f64 * 0.04, row as f64 * 0.04],
            trial: 0,
            init_placement: 0,
            goal_placement: 0,
            init_yaw: 0.0,
            goal_yaw: 0.0,
            success,
            regrasp_count: success.then_some(len),
            failure: (!success).then_some(FailureKind::GraphDisconnected),
            placement_path: Vec::new(),
        }
    }

    fn report(trials: Vec<TrialReport>) -> BenchReport {
        let config = BenchConfig { workspace: [0.04, 0.04], workspace_origin: [0.0, 0.0], ..BenchConfig::default() };
        BenchReport {
            schema_version: SCHEMA_VERSION,
            library_version: "test".into(),
            mesh_name: "m".into(),
            mesh_hash: "h".into(),
            config,
            planar_placements: 1,
            pin_placements: 0,
            grasps: 1,
            aggregate: Aggregate::from_trials(&trials),
            trials,
            timings: Timings::default(),
        }
    }

    #[test]
    fn mean_length_over_successes_only() {
        let a = Aggregate::from_trials(&[trial(0, 0, true, 1), trial(0, 0, true, 3), trial(0, 0, false, 9)]);
        assert_eq!(a.mean_length, Some(2.0));
        assert!((a.success_rate - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(a.failures.get("graph-disconnected"), Some(&1));
    }

    #[test]
    fn uniform_success_gives_uniform_outputs() {
        let r = report((0..2).flat_map(|c| (0..2).map(move |row| trial(c, row, true, 0))).collect());
        let csv = String::from_utf8(emit_report(&r, ReportFormat::Csv).unwrap()).unwrap();
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|l| l.split(',').nth(6) == Some("1.0000")));
        let svg = String::from_utf8(emit_report(&r, ReportFormat::Svg).unwrap()).unwrap();
        assert_eq!(svg.matches("class=\"corner\"").count(), 4);
        assert_eq!(svg.matches("#0000ff").count(), 4);
    }

    #[test]
    fn empty_report_is_an_error() {
        let r = report(Vec::new());
        for f in [ReportFormat::Json, ReportFormat::Csv, ReportFormat::Svg] {
            assert!(matches!(emit_report(&r, f), Err(Error::EmptyReport(_))));
        }
    }

    #[test]
    fn colors() {
        assert_eq!(heat_color(0.0), "#ff0000");
        assert_eq!(heat_color(1.0), "#0000ff");
        assert_eq!(heat_color(0.5), "#800080");
    }

    #[test]
    fn p95() {
        let t = Timings { graph_build: 1.0, graph_search: (1..=100).map(f64::from).collect() };
        let s = t.search_summary();
        assert_eq!(s.p95, 95.0);
        assert!((s.mean - 50.5).abs() < 1e-12);
    }
}
