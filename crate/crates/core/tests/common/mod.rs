//! Oracles and helpers shared by the integration tests. Each oracle is
//! written from scratch here rather than calling into the library.

#![allow(dead_code)]

pub mod graphs;

use nalgebra::{Point3, Unit, Vector3};
use pinregrasp::geometry::Mesh;
use pinregrasp::shapes;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vector(rng: &mut impl Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn random_rotation(rng: &mut impl Rng) -> nalgebra::Rotation3<f64> {
    let axis = Unit::new_normalize(unit_vector(rng));
    nalgebra::Rotation3::from_axis_angle(&axis, rng.random_range(0.0..std::f64::consts::TAU))
}

/// The meshes most tests run over, at gripper-compatible sizes.
pub fn suite() -> Vec<Mesh> {
    vec![
        shapes::cuboid(0.03, 0.03, 0.03),
        shapes::regular_tetrahedron(0.06),
        shapes::l_block(),
        shapes::pot_lid(),
        shapes::cross_block(),
    ]
}

/// Möller–Trumbore: parameter `t ∈ [0, 1]` where segment `p + t (q - p)`
/// crosses triangle `tri`, if it does.
pub fn moller_trumbore(p: &Point3<f64>, q: &Point3<f64>, tri: &[Point3<f64>; 3]) -> Option<f64> {
    let dir = q - p;
    let e1 = tri[1] - tri[0];
    let e2 = tri[2] - tri[0];
    let h = dir.cross(&e2);
    let det = e1.dot(&h);
    if det.abs() < 1e-18 {
        return None;
    }
    let inv = 1.0 / det;
    let s = p - tri[0];
    let u = inv * s.dot(&h);
    if !(0.0..=1.0).contains(&u) {
        return None;
    }
    let qv = s.cross(&e1);
    let v = inv * dir.dot(&qv);
    if v < 0.0 || u + v > 1.0 {
        return None;
    }
    let t = inv * e2.dot(&qv);
    (0.0..=1.0).contains(&t).then_some(t)
}

/// Even-odd ray casting along a fixed skew direction.
pub fn inside_by_crossings(p: &Point3<f64>, mesh: &Mesh) -> bool {
    parity_along(p, mesh, &Vector3::new(0.5773, 0.5774, 0.5775))
}

/// Majority of three ray-parity tests, so a ray that grazes a shared edge
/// and counts it twice cannot decide the answer alone.
pub fn inside_by_vote(p: &Point3<f64>, mesh: &Mesh) -> bool {
    let dirs = [Vector3::new(0.5773, 0.5774, 0.5775), Vector3::new(-0.31, 0.83, 0.47), Vector3::new(0.71, -0.23, -0.66)];
    dirs.iter().filter(|d| parity_along(p, mesh, d)).count() >= 2
}

fn parity_along(p: &Point3<f64>, mesh: &Mesh, dir: &Vector3<f64>) -> bool {
    let far = p + dir.normalize() * 1e3;
    let mut count = 0;
    for i in 0..mesh.triangles().len() {
        if moller_trumbore(p, &far, &mesh.triangle(i)).is_some() {
            count += 1;
        }
    }
    count % 2 == 1
}

/// Independent friction-cone membership: the unit vector along the line of
/// action lies within the cone of half-angle atan(mu) about `axis`.
pub fn in_cone(line: &Vector3<f64>, axis: &Vector3<f64>, mu: f64) -> bool {
    let c = line.normalize().dot(&axis.normalize());
    // cos(angle) >= cos(atan(mu)) = 1 / sqrt(1 + mu^2)
    c >= 1.0 / (1.0 + mu * mu).sqrt() - 1e-12
}
