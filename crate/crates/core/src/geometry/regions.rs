use std::collections::{HashMap, VecDeque};

use nalgebra::{Point3, Vector3};

use super::mesh::Mesh;

/// A maximal set of edge-connected, coplanar mesh triangles.
#[derive(Debug, Clone)]
pub struct FlatRegion {
    pub triangles: Vec<usize>,
    /// Outward unit normal (area weighted).
    pub normal: Vector3<f64>,
    pub area: f64,
    /// Area centroid.
    pub centroid: Point3<f64>,
    /// Vertex indices used by the region, ascending.
    pub vertices: Vec<usize>,
    /// Edges used by exactly one triangle of the region.
    pub boundary: Vec<[usize; 2]>,
}

impl FlatRegion {
    pub fn contains_point(&self, mesh: &Mesh, p: &Point3<f64>, eps: f64) -> Option<usize> {
        self.triangles.iter().copied().find(|&ti| {
            let [a, b, c] = mesh.triangle(ti);
            let n = self.normal;
            let inside = |u: &Point3<f64>, v: &Point3<f64>| (v - u).cross(&(p - u)).dot(&n) >= -eps;
            inside(&a, &b) && inside(&b, &c) && inside(&c, &a)
        })
    }

    /// Distance from `p` (in the region plane) to the nearest boundary edge.
    pub fn boundary_distance(&self, mesh: &Mesh, p: &Point3<f64>) -> f64 {
        self.boundary
            .iter()
            .map(|e| {
                super::predicates::point_segment_distance(p, &mesh.vertices()[e[0]], &mesh.vertices()[e[1]])
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Groups triangles by flood fill across shared edges whose normals deviate
/// from the region's seed normal by at most `max_angle`.
pub fn flat_regions(mesh: &Mesh, max_angle: f64) -> Vec<FlatRegion> {
    let tris = mesh.triangles();
    let normals: Vec<Vector3<f64>> = (0..tris.len()).map(|i| mesh.normal(i)).collect();
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (ti, t) in tris.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            by_edge.entry((a.min(b), a.max(b))).or_default().push(ti);
        }
    }
    let cos_limit = max_angle.cos();
    let mut assigned = vec![false; tris.len()];
    let mut regions = Vec::new();
    for seed in 0..tris.len() {
        if assigned[seed] {
            continue;
        }
        assigned[seed] = true;
        let mut members = vec![seed];
        let mut queue = VecDeque::from([seed]);
        while let Some(ti) = queue.pop_front() {
            let t = tris[ti];
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                for &nb in &by_edge[&(a.min(b), a.max(b))] {
                    if !assigned[nb] && normals[nb].dot(&normals[seed]) >= cos_limit {
                        assigned[nb] = true;
                        members.push(nb);
                        queue.push_back(nb);
                    }
                }
            }
        }
        members.sort_unstable();
        regions.push(build_region(mesh, members));
    }
    regions
}

fn build_region(mesh: &Mesh, triangles: Vec<usize>) -> FlatRegion {
    let mut area_vec = Vector3::zeros();
    let mut area = 0.0;
    let mut moment = Vector3::zeros();
    let mut edge_count: HashMap<(usize, usize), (usize, [usize; 2])> = HashMap::new();
    let mut vertices = Vec::new();
    for &ti in &triangles {
        let av = mesh.area_vector(ti);
        let a = 0.5 * av.norm();
        area_vec += av;
        area += a;
        let [p, q, r] = mesh.triangle(ti);
        moment += a * (p.coords + q.coords + r.coords) / 3.0;
        let t = mesh.triangles()[ti];
        for k in 0..3 {
            let (u, v) = (t[k], t[(k + 1) % 3]);
            let e = edge_count.entry((u.min(v), u.max(v))).or_insert((0, [u, v]));
            e.0 += 1;
            vertices.push(u);
        }
    }
    vertices.sort_unstable();
    vertices.dedup();
    let mut boundary: Vec<[usize; 2]> = edge_count
        .into_values()
        .filter(|(n, _)| *n == 1)
        .map(|(_, e)| e)
        .collect();
    boundary.sort_unstable();
    FlatRegion {
        triangles,
        normal: area_vec.normalize(),
        area,
        centroid: Point3::from(moment / area),
        vertices,
        boundary,
    }
}
