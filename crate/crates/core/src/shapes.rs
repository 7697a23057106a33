//! Parametric test objects: boxes, a tetrahedron, and the extruded models
//! used by the benchmark (L block, cross, pot lid).

use nalgebra::Point3;

use crate::error::Result;
use crate::geometry::Mesh;

fn build(name: &str, vertices: Vec<Point3<f64>>, triangles: Vec<[usize; 3]>) -> Mesh {
    Mesh::new(name, vertices, triangles).expect("built-in shape is valid")
}

pub fn unit_cube() -> Mesh {
    let mut m = cuboid(1.0, 1.0, 1.0);
    m = m.transformed(&crate::geometry::Pose::new(
        nalgebra::Rotation3::identity(),
        nalgebra::Vector3::new(0.5, 0.5, 0.5),
    ));
    Mesh::new("cube", m.vertices().to_vec(), m.triangles().to_vec()).expect("cube")
}

/// Axis-aligned box centered at the origin.
pub fn cuboid(sx: f64, sy: f64, sz: f64) -> Mesh {
    let (hx, hy) = (sx / 2.0, sy / 2.0);
    let outline = [(-hx, -hy), (hx, -hy), (hx, hy), (-hx, hy)];
    let m = extrude("box", &outline, sz);
    m.transformed(&crate::geometry::Pose::new(
        nalgebra::Rotation3::identity(),
        nalgebra::Vector3::new(0.0, 0.0, -sz / 2.0),
    ))
}

pub fn regular_tetrahedron(edge: f64) -> Mesh {
    let s = edge / (2.0 * 2f64.sqrt());
    let v = vec![
        Point3::new(s, s, s),
        Point3::new(s, -s, -s),
        Point3::new(-s, s, -s),
        Point3::new(-s, -s, s),
    ];
    build("tetrahedron", v, vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]])
}

/// L-shaped extrusion bounded by a 9 × 9 × 3 cm box, 3 cm arms.
pub fn l_block() -> Mesh {
    let outline = [
        (0.0, 0.0),
        (0.09, 0.0),
        (0.09, 0.03),
        (0.03, 0.03),
        (0.03, 0.09),
        (0.0, 0.09),
    ];
    let m = extrude("l", &outline, 0.03);
    rename(m, "l")
}

/// Plus-shaped extrusion: four 3 cm arms, 9 cm across, 3 cm thick.
pub fn cross_block() -> Mesh {
    let (a, b) = (0.03, 0.06);
    let outline = [
        (a, 0.0),
        (b, 0.0),
        (b, a),
        (0.09, a),
        (0.09, b),
        (b, b),
        (b, 0.09),
        (a, 0.09),
        (a, b),
        (0.0, b),
        (0.0, a),
        (a, a),
    ];
    rename(extrude("cross", &outline, 0.03), "cross")
}

/// Dimensions of the pot-lid model.
#[derive(Debug, Clone, Copy)]
pub struct PotLidDims {
    /// Circumradius of the regular polygonal plate.
    pub radius: f64,
    pub sides: usize,
    pub thickness: f64,
    /// Handle footprint (x, y) and height above the plate.
    pub handle: (f64, f64, f64),
}

impl Default for PotLidDims {
    fn default() -> Self {
        PotLidDims {
            radius: 0.045,
            sides: 8,
            thickness: 0.008,
            handle: (0.03, 0.02, 0.03),
        }
    }
}

/// A flat polygonal plate with a box handle on top (plate bottom at z = 0).
pub fn pot_lid() -> Mesh {
    pot_lid_with(&PotLidDims::default())
}

pub fn pot_lid_with(d: &PotLidDims) -> Mesh {
    let n = d.sides;
    let t = d.thickness;
    let top = t + d.handle.2;
    let (hx, hy) = (d.handle.0 / 2.0, d.handle.1 / 2.0);
    let mut v: Vec<Point3<f64>> = Vec::new();
    let ring: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            // Offset by half a step so a flat side faces each axis.
            let a = std::f64::consts::TAU * (k as f64 + 0.5) / n as f64;
            (d.radius * a.cos(), d.radius * a.sin())
        })
        .collect();
    for &(x, y) in &ring {
        v.push(Point3::new(x, y, 0.0));
    }
    for &(x, y) in &ring {
        v.push(Point3::new(x, y, t));
    }
    let inner = [(hx, hy), (-hx, hy), (-hx, -hy), (hx, -hy)];
    let hb = v.len();
    for &(x, y) in &inner {
        v.push(Point3::new(x, y, t));
    }
    let ht = v.len();
    for &(x, y) in &inner {
        v.push(Point3::new(x, y, top));
    }
    let mut tris = Vec::new();
    // Bottom plate face (fan), facing down.
    for k in 1..n - 1 {
        tris.push([0, k + 1, k]);
    }
    // Plate rim.
    for k in 0..n {
        let k1 = (k + 1) % n;
        tris.push([k, k1, n + k1]);
        tris.push([k, n + k1, n + k]);
    }
    // Top annulus between the plate outline and the handle footprint,
    // merged by polar angle.
    let angle = |x: f64, y: f64| y.atan2(x).rem_euclid(std::f64::consts::TAU);
    let mut outer_idx: Vec<usize> = (0..n).collect();
    outer_idx.sort_by(|&a, &b| angle(ring[a].0, ring[a].1).total_cmp(&angle(ring[b].0, ring[b].1)));
    let mut inner_idx: Vec<usize> = (0..4).collect();
    inner_idx.sort_by(|&a, &b| angle(inner[a].0, inner[a].1).total_cmp(&angle(inner[b].0, inner[b].1)));
    let outer_ang: Vec<f64> = outer_idx.iter().map(|&i| angle(ring[i].0, ring[i].1)).collect();
    let inner_ang: Vec<f64> = inner_idx.iter().map(|&i| angle(inner[i].0, inner[i].1)).collect();
    let (mut i, mut j) = (0usize, 0usize);
    while i < n || j < 4 {
        let o = n + outer_idx[i % n];
        let h = hb + inner_idx[j % 4];
        let next_outer = outer_ang[(i + 1) % n] + if i + 1 >= n { std::f64::consts::TAU } else { 0.0 };
        let next_inner = inner_ang[(j + 1) % 4] + if j + 1 >= 4 { std::f64::consts::TAU } else { 0.0 };
        if j >= 4 || (i < n && next_outer <= next_inner) {
            tris.push([o, n + outer_idx[(i + 1) % n], h]);
            i += 1;
        } else {
            tris.push([o, hb + inner_idx[(j + 1) % 4], h]);
            j += 1;
        }
    }
    // Handle sides and top.
    for k in 0..4 {
        let k1 = (k + 1) % 4;
        tris.push([hb + k, hb + k1, ht + k1]);
        tris.push([hb + k, ht + k1, ht + k]);
    }
    tris.push([ht, ht + 1, ht + 2]);
    tris.push([ht, ht + 2, ht + 3]);
    build("pot_lid", v, tris)
}

fn rename(m: Mesh, name: &str) -> Mesh {
    Mesh::new(name, m.vertices().to_vec(), m.triangles().to_vec()).expect("rename")
}

/// Extrudes a simple counter-clockwise polygon in the XY plane from z = 0 to
/// z = `depth`.
pub fn extrude(name: &str, outline: &[(f64, f64)], depth: f64) -> Mesh {
    let n = outline.len();
    let mut v: Vec<Point3<f64>> = outline.iter().map(|&(x, y)| Point3::new(x, y, 0.0)).collect();
    v.extend(outline.iter().map(|&(x, y)| Point3::new(x, y, depth)));
    let caps = ear_clip(outline);
    let mut tris = Vec::new();
    for t in &caps {
        tris.push([t[0], t[2], t[1]]);
        tris.push([n + t[0], n + t[1], n + t[2]]);
    }
    for k in 0..n {
        let k1 = (k + 1) % n;
        tris.push([k, k1, n + k1]);
        tris.push([k, n + k1, n + k]);
    }
    build(name, v, tris)
}

/// Ear-clipping triangulation of a simple counter-clockwise polygon.
pub fn ear_clip(poly: &[(f64, f64)]) -> Vec<[usize; 3]> {
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut idx: Vec<usize> = (0..poly.len()).collect();
    let mut out = Vec::new();
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let (ia, ib, ic) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            let (a, b, c) = (poly[ia], poly[ib], poly[ic]);
            if cross(a, b, c) <= 1e-15 {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                j != ia
                    && j != ib
                    && j != ic
                    && cross(a, b, poly[j]) >= 0.0
                    && cross(b, c, poly[j]) >= 0.0
                    && cross(c, a, poly[j]) >= 0.0
            });
            if !blocked {
                out.push([ia, ib, ic]);
                idx.remove(k);
                clipped = true;
                break;
            }
        }
        assert!(clipped, "polygon is not simple");
    }
    out.push([idx[0], idx[1], idx[2]]);
    out
}

/// Splits every triangle into four at its edge midpoints.
pub fn subdivide(mesh: &Mesh, levels: usize) -> Result<Mesh> {
    let mut verts = mesh.vertices().to_vec();
    let mut tris = mesh.triangles().to_vec();
    for _ in 0..levels {
        let mut mid = std::collections::HashMap::new();
        let mut next = Vec::with_capacity(tris.len() * 4);
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Point3<f64>>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                verts.push(nalgebra::center(&verts[a], &verts[b]));
                verts.len() - 1
            })
        };
        for t in &tris {
            let ab = midpoint(t[0], t[1], &mut verts);
            let bc = midpoint(t[1], t[2], &mut verts);
            let ca = midpoint(t[2], t[0], &mut verts);
            next.push([t[0], ab, ca]);
            next.push([ab, t[1], bc]);
            next.push([ca, bc, t[2]]);
            next.push([ab, bc, ca]);
        }
        tris = next;
    }
    Mesh::new(mesh.name(), verts, tris)
}

/// Built-in model by name: `cube`, `tetrahedron`, `l`, `cross`, `pot_lid`.
pub fn builtin(name: &str) -> Option<Mesh> {
    match name {
        "cube" => Some(unit_cube()),
        "cube3" => Some(rename(cuboid(0.03, 0.03, 0.03), "cube3")),
        "tetrahedron" => Some(regular_tetrahedron(0.06)),
        "l" => Some(l_block()),
        "cross" => Some(cross_block()),
        "pot_lid" | "potlid" => Some(pot_lid()),
        _ => None,
    }
}
