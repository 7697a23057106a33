use std::collections::{HashMap, VecDeque};

use nalgebra::{Point3, Vector3};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::pose::Pose;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// Indexed triangle mesh in meters.
///
/// Construction welds coincident vertices, drops degenerate triangles and
/// orients every connected component so that its signed volume is positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    name: String,
    vertices: Vec<Point3<f64>>,
    triangles: Vec<[usize; 3]>,
}

impl Mesh {
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<Point3<f64>>,
        triangles: Vec<[usize; 3]>,
    ) -> Result<Mesh> {
        Self::with_tolerances(name, vertices, triangles, &Tolerances::default())
    }

    pub fn with_tolerances(
        name: impl Into<String>,
        vertices: Vec<Point3<f64>>,
        triangles: Vec<[usize; 3]>,
        tol: &Tolerances,
    ) -> Result<Mesh> {
        for (i, t) in triangles.iter().enumerate() {
            if t.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::DegenerateInput(format!(
                    "triangle {i} references a vertex out of range"
                )));
            }
        }
        let (vertices, remap) = weld(&vertices, tol.weld);
        let mut tris: Vec<[usize; 3]> = triangles
            .iter()
            .map(|t| [remap[t[0]], remap[t[1]], remap[t[2]]])
            .filter(|t| !is_degenerate(&vertices, t, tol.geom))
            .collect();
        if tris.is_empty() {
            return Err(Error::EmptyMesh);
        }
        repair_winding(&vertices, &mut tris);
        // Drop vertices no longer referenced so hull/mass code never sees strays.
        let mut used = vec![usize::MAX; vertices.len()];
        let mut compact = Vec::new();
        for t in tris.iter_mut() {
            for v in t.iter_mut() {
                if used[*v] == usize::MAX {
                    used[*v] = compact.len();
                    compact.push(vertices[*v]);
                }
                *v = used[*v];
            }
        }
        Ok(Mesh {
            name: name.into(),
            vertices: compact,
            triangles: tris,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[Point3<f64>] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, i: usize) -> [Point3<f64>; 3] {
        let t = self.triangles[i];
        [self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]]
    }

    /// Unnormalized normal (twice the area vector) of triangle `i`.
    pub fn area_vector(&self, i: usize) -> Vector3<f64> {
        let [a, b, c] = self.triangle(i);
        (b - a).cross(&(c - a))
    }

    pub fn normal(&self, i: usize) -> Vector3<f64> {
        self.area_vector(i).normalize()
    }

    pub fn area(&self, i: usize) -> f64 {
        0.5 * self.area_vector(i).norm()
    }

    pub fn bounds(&self) -> (Point3<f64>, Point3<f64>) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }

    /// Largest bounding-box extent; used to scale absolute tolerances.
    pub fn scale(&self) -> f64 {
        let (lo, hi) = self.bounds();
        (hi - lo).max()
    }

    pub fn transformed(&self, pose: &Pose) -> Mesh {
        Mesh {
            name: self.name.clone(),
            vertices: self.vertices.iter().map(|v| pose.transform_point(v)).collect(),
            triangles: self.triangles.clone(),
        }
    }

    /// Uniform scaling about `center`.
    pub fn scaled_about(&self, center: &Point3<f64>, factor: f64) -> Mesh {
        Mesh {
            name: self.name.clone(),
            vertices: self
                .vertices
                .iter()
                .map(|v| center + (v - center) * factor)
                .collect(),
            triangles: self.triangles.clone(),
        }
    }

    /// SHA-256 over the little-endian vertex coordinates and triangle indices.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        for v in &self.vertices {
            for c in v.iter() {
                h.update(c.to_le_bytes());
            }
        }
        for t in &self.triangles {
            for &i in t {
                h.update((i as u64).to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }

    /// Signed volume against the origin.
    pub fn signed_volume(&self) -> f64 {
        signed_volume(&self.vertices, &self.triangles)
    }
}

fn is_degenerate(vertices: &[Point3<f64>], t: &[usize; 3], eps: f64) -> bool {
    if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
        return true;
    }
    let (a, b, c) = (vertices[t[0]], vertices[t[1]], vertices[t[2]]);
    let longest = (b - a).norm().max((c - b).norm()).max((a - c).norm());
    // Height over the longest edge.
    (b - a).cross(&(c - a)).norm() / longest <= eps
}

fn weld(vertices: &[Point3<f64>], tol: f64) -> (Vec<Point3<f64>>, Vec<usize>) {
    let cell = tol.max(f64::MIN_POSITIVE);
    let key = |p: &Point3<f64>| {
        (
            (p.x / cell).floor() as i64,
            (p.y / cell).floor() as i64,
            (p.z / cell).floor() as i64,
        )
    };
    let mut grid: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    let mut out: Vec<Point3<f64>> = Vec::new();
    let mut remap = Vec::with_capacity(vertices.len());
    for p in vertices {
        let k = key(p);
        let mut found = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(list) = grid.get(&(k.0 + dx, k.1 + dy, k.2 + dz)) {
                        for &i in list {
                            if (out[i] - p).norm() <= tol {
                                found = Some(i);
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        let idx = match found {
            Some(i) => i,
            None => {
                out.push(*p);
                grid.entry(k).or_default().push(out.len() - 1);
                out.len() - 1
            }
        };
        remap.push(idx);
    }
    (out, remap)
}

pub(crate) fn signed_volume(vertices: &[Point3<f64>], triangles: &[[usize; 3]]) -> f64 {
    triangles
        .iter()
        .map(|t| {
            let (a, b, c) = (vertices[t[0]].coords, vertices[t[1]].coords, vertices[t[2]].coords);
            a.dot(&b.cross(&c)) / 6.0
        })
        .sum()
}

/// Orients triangles consistently by flood fill over shared edges, then flips
/// any connected component whose signed volume is negative.
fn repair_winding(vertices: &[Point3<f64>], tris: &mut [[usize; 3]]) {
    let mut edge_map: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (ti, t) in tris.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            edge_map.entry((a.min(b), a.max(b))).or_default().push(ti);
        }
    }
    let has_directed = |t: &[usize; 3], a: usize, b: usize| {
        (0..3).any(|k| t[k] == a && t[(k + 1) % 3] == b)
    };

    let mut visited = vec![false; tris.len()];
    for seed in 0..tris.len() {
        if visited[seed] {
            continue;
        }
        let mut component = vec![seed];
        let mut queue = VecDeque::from([seed]);
        visited[seed] = true;
        while let Some(ti) = queue.pop_front() {
            let t = tris[ti];
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                for &ni in &edge_map[&(a.min(b), a.max(b))] {
                    if visited[ni] {
                        continue;
                    }
                    visited[ni] = true;
                    // A consistent neighbour traverses the shared edge as (b, a).
                    if has_directed(&tris[ni], a, b) {
                        tris[ni].swap(1, 2);
                    }
                    component.push(ni);
                    queue.push_back(ni);
                }
            }
        }
        let comp_tris: Vec<[usize; 3]> = component.iter().map(|&i| tris[i]).collect();
        if signed_volume(vertices, &comp_tris) < 0.0 {
            for &i in &component {
                tris[i].swap(1, 2);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn rejects_out_of_range_index() {
        let v = vec![Point3::origin(), Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0)];
        assert!(matches!(
            Mesh::new("bad", v, vec![[0, 1, 3]]),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn all_degenerate_is_empty() {
        let v = vec![Point3::origin(), Point3::new(1.0, 0.0, 0.0), Point3::new(2.0, 0.0, 0.0)];
        assert!(matches!(Mesh::new("flat", v, vec![[0, 1, 2]]), Err(Error::EmptyMesh)));
    }

    #[test]
    fn inverted_cube_is_repaired() {
        let cube = shapes::unit_cube();
        let flipped: Vec<[usize; 3]> = cube
            .triangles()
            .iter()
            .enumerate()
            .map(|(i, t)| if i % 3 == 0 { [t[0], t[2], t[1]] } else { *t })
            .collect();
        let m = Mesh::new("flipped", cube.vertices().to_vec(), flipped).unwrap();
        assert!((m.signed_volume() - 1.0).abs() < 1e-12);

        let all_flipped: Vec<[usize; 3]> =
            cube.triangles().iter().map(|t| [t[0], t[2], t[1]]).collect();
        let m = Mesh::new("inside-out", cube.vertices().to_vec(), all_flipped).unwrap();
        assert!((m.signed_volume() - 1.0).abs() < 1e-12);
    }
}
