//! Randomized reorientation benchmark over a workspace grid.

mod config;
mod report;
mod run;

pub use config::{BenchConfig, ReachabilityModel};
pub use report::{
    emit_report, heat_color, write_report_dir, Aggregate, BenchReport, CornerStats, Manifest, PhaseSummary,
    ReportFormat, Timings, TrialReport,
};
pub use run::{pipeline_params, run_reorientation_benchmark, scaled_mesh, sweep, trial_rng, SweepAxis};
