//! Total grasp counts per density for a built-in shape.
//!
//! `cargo run --release --example grasp_counts -- l`

use pinregrasp::grasp::{enumerate_total_grasps, GripperModel};
use pinregrasp::shapes;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "l".into());
    let verbose = std::env::args().any(|a| a == "-v");
    let mesh = shapes::builtin(&name).expect("unknown shape");
    for density in 1..=8 {
        let g = enumerate_total_grasps(&mesh, &GripperModel::default(), density, 0.5);
        println!("density {density}: {} grasps", g.len());
        if verbose {
            for x in &g {
                println!(
                    "  #{} regions {:?} center {:.4?} jaw {:+.2?} approach {:+.2?}",
                    x.id,
                    x.regions,
                    x.center.coords.as_slice(),
                    x.jaw_axis.as_slice(),
                    x.approach.as_slice()
                );
            }
        }
    }
}
