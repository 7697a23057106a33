//! Desk-scale success rates for the built-in shapes under several settings.
//!
//! `cargo run --release --example desk_orderings -- [seed...]`

use pinregrasp::bench::{run_reorientation_benchmark, BenchConfig};
use pinregrasp::graph::PlanMode;
use pinregrasp::shapes;

fn rate(shape: &str, cfg: &BenchConfig) -> (f64, Option<f64>, String) {
    let mesh = shapes::builtin(shape).expect("shape");
    let r = run_reorientation_benchmark(&mesh, cfg, &cfg.reach).expect("bench");
    (r.success_rate(), r.mean_length(), format!("{:?}", r.aggregate.failures))
}

fn main() {
    let seeds: Vec<u64> = std::env::args().skip(1).map(|s| s.parse().expect("seed")).collect();
    let seeds = if seeds.is_empty() { vec![1, 2, 3] } else { seeds };
    for seed in seeds {
        let base = BenchConfig { rng_seed: seed, ..BenchConfig::desk() };
        let planar = BenchConfig { mode: PlanMode::PlanarOnly, ..base.clone() };
        let runs = [
            ("pot_lid", "pin", base.clone()),
            ("pot_lid", "planar", planar.clone()),
            ("pot_lid", "pin l=0.005", BenchConfig { pin_length: 0.005, ..base.clone() }),
            ("l", "pin d=8", base.clone()),
            ("l", "pin d=3", BenchConfig { density: 3, ..base.clone() }),
            ("cross", "pin", base.clone()),
            ("cross", "planar", planar.clone()),
        ];
        for (shape, label, cfg) in runs {
            let (r, len, f) = rate(shape, &cfg);
            println!("seed {seed} {shape:8} {label:12} success {r:.3} mean_len {len:?} {f}");
        }
    }
}
