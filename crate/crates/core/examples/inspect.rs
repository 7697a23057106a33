//! Prints placement and grasp statistics for a built-in shape.
//!
//! `cargo run --example inspect -- pot_lid 0.03`

use pinregrasp::geometry::mass_properties;
use pinregrasp::grasp::{associate_grasps, enumerate_total_grasps, GraspFilter, GripperModel};
use pinregrasp::placement::{compute_placements, PlacementParams};
use pinregrasp::shapes;

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "pot_lid".into());
    let pin_length: f64 = args.next().map(|s| s.parse().expect("pin length")).unwrap_or(0.03);
    let density: usize = args.next().map(|s| s.parse().expect("density")).unwrap_or(8);
    let mesh = shapes::builtin(&name).expect("unknown shape");
    let params = PlacementParams { pin_length, ..Default::default() };
    let set = compute_placements(&mesh, &params).expect("placements");
    let gripper = GripperModel::default();
    let total = enumerate_total_grasps(&mesh, &gripper, density, params.mu);
    let com = mass_properties(&mesh).expect("mass").center_of_mass;
    let all = set.all();
    let assoc = associate_grasps(&total, &all, &GraspFilter::new(gripper, com));
    println!(
        "{name}: {} triangles, {} samples, com {:.4?}",
        mesh.triangles().len(),
        set.provenance.sample_count,
        com.coords.as_slice()
    );
    println!("planar {}, pin {}, grasps {}", set.planar.len(), set.pin.len(), total.len());
    for (i, p) in all.iter().enumerate() {
        let up = p.world_pose().rotation.inverse() * nalgebra::Vector3::z();
        let ids = &assoc[i].grasp_ids;
        let degree = assoc
            .iter()
            .enumerate()
            .filter(|(j, a)| *j != i && a.grasp_ids.iter().any(|g| ids.binary_search(g).is_ok()))
            .count();
        let planar_degree = assoc[..set.planar.len()]
            .iter()
            .enumerate()
            .filter(|(j, a)| *j != i && a.grasp_ids.iter().any(|g| ids.binary_search(g).is_ok()))
            .count();
        println!(
            "  #{i:2} {:?} up {:+.3?} com_h {:.4} grasps {:3} degree {degree} planar-degree {planar_degree}",
            p.kind(),
            up.as_slice(),
            p.com_height(),
            ids.len()
        );
    }
}
