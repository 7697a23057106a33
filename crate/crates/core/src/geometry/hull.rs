//! 3D quickhull with coplanar facet merging.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use nalgebra::{Point3, Vector3};
use serde::{Deserialize, Serialize};

use super::mesh::Mesh;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// A maximal planar polygon of the hull, counter-clockwise seen from outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullFace {
    pub vertices: Vec<usize>,
    pub normal: Vector3<f64>,
    /// Plane offset: `normal · p <= offset` for every input point.
    pub offset: f64,
    pub area: f64,
    pub centroid: Point3<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullEdge {
    pub a: usize,
    pub b: usize,
    pub faces: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexHull {
    /// All input points; hull indices refer into this list.
    pub points: Vec<Point3<f64>>,
    /// Sorted indices of points that are hull vertices.
    pub vertices: Vec<usize>,
    pub faces: Vec<HullFace>,
    pub edges: Vec<HullEdge>,
}

impl ConvexHull {
    pub fn point(&self, i: usize) -> Point3<f64> {
        self.points[i]
    }

    pub fn edge_points(&self, e: &HullEdge) -> (Point3<f64>, Point3<f64>) {
        (self.points[e.a], self.points[e.b])
    }

    pub fn face_points(&self, f: usize) -> Vec<Point3<f64>> {
        self.faces[f].vertices.iter().map(|&i| self.points[i]).collect()
    }

    /// Minimum of `dir · v` over hull vertices.
    pub fn min_along(&self, dir: &Vector3<f64>) -> f64 {
        self.vertices
            .iter()
            .map(|&i| dir.dot(&self.points[i].coords))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: &Point3<f64>, eps: f64) -> bool {
        self.faces
            .iter()
            .all(|f| f.normal.dot(&p.coords) - f.offset <= eps)
    }
}

pub fn convex_hull(mesh: &Mesh) -> Result<ConvexHull> {
    convex_hull_of_points(mesh.vertices(), &Tolerances::default())
}

struct Facet {
    v: [usize; 3],
    normal: Vector3<f64>,
    offset: f64,
    outside: Vec<usize>,
    alive: bool,
}

impl Facet {
    fn new(points: &[Point3<f64>], v: [usize; 3]) -> Facet {
        let (a, b, c) = (points[v[0]], points[v[1]], points[v[2]]);
        let normal = (b - a).cross(&(c - a)).normalize();
        Facet {
            v,
            normal,
            offset: normal.dot(&a.coords),
            outside: Vec::new(),
            alive: true,
        }
    }

    fn distance(&self, p: &Point3<f64>) -> f64 {
        self.normal.dot(&p.coords) - self.offset
    }

    fn edges(&self) -> [(usize, usize); 3] {
        [(self.v[0], self.v[1]), (self.v[1], self.v[2]), (self.v[2], self.v[0])]
    }
}

pub fn convex_hull_of_points(points: &[Point3<f64>], tol: &Tolerances) -> Result<ConvexHull> {
    if points.len() < 4 {
        return Err(Error::DegenerateInput("fewer than 4 points".into()));
    }
    let extent = {
        let mut lo = points[0];
        let mut hi = points[0];
        for p in points {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        (hi - lo).max()
    };
    // Absolute tolerance in the spirit of 1e-9 on unit-scale input, never larger.
    let eps = (1e-10 * extent).max(1e-15).min(tol.geom);

    let facets = quickhull_triangles(points, eps, extent)?;
    let mut hull = merge_facets(points, &facets, tol.hull_merge_angle, eps)?;
    hull.points = points.to_vec();
    Ok(hull)
}

fn initial_simplex(points: &[Point3<f64>], extent: f64) -> Result<[usize; 4]> {
    let degenerate = || Error::DegenerateInput("all points are coplanar".into());
    let small = 1e-12 * extent.max(1e-300);
    // Pair of points with the largest separation along any coordinate axis.
    let mut best = (0, 0, -1.0);
    for axis in 0..3 {
        let (mut lo, mut hi) = (0, 0);
        for (i, p) in points.iter().enumerate() {
            if p[axis] < points[lo][axis] {
                lo = i;
            }
            if p[axis] > points[hi][axis] {
                hi = i;
            }
        }
        let d = points[hi][axis] - points[lo][axis];
        if d > best.2 {
            best = (lo, hi, d);
        }
    }
    let (i0, i1, span) = best;
    if span <= small {
        return Err(degenerate());
    }
    let dir = (points[i1] - points[i0]).normalize();
    let (mut i2, mut far) = (usize::MAX, small);
    for (i, p) in points.iter().enumerate() {
        let d = (p - points[i0]).cross(&dir).norm();
        if d > far {
            far = d;
            i2 = i;
        }
    }
    if i2 == usize::MAX {
        return Err(degenerate());
    }
    let n = (points[i1] - points[i0]).cross(&(points[i2] - points[i0])).normalize();
    let (mut i3, mut far) = (usize::MAX, small);
    for (i, p) in points.iter().enumerate() {
        let d = n.dot(&(p - points[i0])).abs();
        if d > far {
            far = d;
            i3 = i;
        }
    }
    if i3 == usize::MAX {
        return Err(degenerate());
    }
    Ok([i0, i1, i2, i3])
}

fn quickhull_triangles(points: &[Point3<f64>], eps: f64, extent: f64) -> Result<Vec<[usize; 3]>> {
    let [i0, i1, i2, i3] = initial_simplex(points, extent)?;
    let mut facets: Vec<Facet> = Vec::new();
    let centroid = Point3::from(
        (points[i0].coords + points[i1].coords + points[i2].coords + points[i3].coords) / 4.0,
    );
    for tri in [[i0, i1, i2], [i0, i3, i1], [i1, i3, i2], [i2, i3, i0]] {
        let mut f = Facet::new(points, tri);
        if f.distance(&centroid) > 0.0 {
            f = Facet::new(points, [tri[0], tri[2], tri[1]]);
        }
        facets.push(f);
    }
    let mut edge_owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (fi, f) in facets.iter().enumerate() {
        for e in f.edges() {
            edge_owner.insert(e, fi);
        }
    }
    let simplex = [i0, i1, i2, i3];
    for (pi, p) in points.iter().enumerate() {
        if simplex.contains(&pi) {
            continue;
        }
        if let Some(f) = facets.iter_mut().find(|f| f.distance(p) > eps) {
            f.outside.push(pi);
        }
    }

    let mut cursor = 0;
    loop {
        while cursor < facets.len() && (!facets[cursor].alive || facets[cursor].outside.is_empty()) {
            cursor += 1;
        }
        if cursor == facets.len() {
            break;
        }
        let start = cursor;
        let apex = *facets[start]
            .outside
            .iter()
            .max_by(|&&a, &&b| {
                facets[start]
                    .distance(&points[a])
                    .total_cmp(&facets[start].distance(&points[b]))
                    .then(b.cmp(&a))
            })
            .expect("non-empty outside set");
        let ap = points[apex];

        // Faces visible from the apex, grown from the starting facet.
        let mut visible = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(fi) = queue.pop_front() {
            for (a, b) in facets[fi].edges() {
                let nb = edge_owner[&(b, a)];
                if !visible.contains(&nb) && facets[nb].distance(&ap) > eps {
                    visible.insert(nb);
                    queue.push_back(nb);
                }
            }
        }
        let mut horizon = Vec::new();
        for &fi in &visible {
            for (a, b) in facets[fi].edges() {
                if !visible.contains(&edge_owner[&(b, a)]) {
                    horizon.push((a, b));
                }
            }
        }
        let mut orphans = Vec::new();
        for &fi in &visible {
            facets[fi].alive = false;
            orphans.append(&mut facets[fi].outside);
            for e in facets[fi].edges() {
                edge_owner.remove(&e);
            }
        }
        let first_new = facets.len();
        for (a, b) in horizon {
            let f = Facet::new(points, [a, b, apex]);
            let id = facets.len();
            for e in f.edges() {
                edge_owner.insert(e, id);
            }
            facets.push(f);
        }
        orphans.sort_unstable();
        for pi in orphans {
            if pi == apex {
                continue;
            }
            let p = points[pi];
            if let Some(f) = facets[first_new..]
                .iter_mut()
                .find(|f| f.distance(&p) > eps)
            {
                f.outside.push(pi);
            }
        }
        cursor = cursor.min(first_new);
    }
    Ok(facets.into_iter().filter(|f| f.alive).map(|f| f.v).collect())
}

fn merge_facets(
    points: &[Point3<f64>],
    tris: &[[usize; 3]],
    max_angle: f64,
    eps: f64,
) -> Result<ConvexHull> {
    let normals: Vec<Vector3<f64>> = tris
        .iter()
        .map(|t| {
            (points[t[1]] - points[t[0]])
                .cross(&(points[t[2]] - points[t[0]]))
                .normalize()
        })
        .collect();
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (ti, t) in tris.iter().enumerate() {
        for k in 0..3 {
            owner.insert((t[k], t[(k + 1) % 3]), ti);
        }
    }
    let cos_limit = max_angle.cos();
    let mut group = vec![usize::MAX; tris.len()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for seed in 0..tris.len() {
        if group[seed] != usize::MAX {
            continue;
        }
        let gid = groups.len();
        group[seed] = gid;
        let mut members = vec![seed];
        let mut queue = VecDeque::from([seed]);
        while let Some(ti) = queue.pop_front() {
            let t = tris[ti];
            for k in 0..3 {
                let nb = owner[&(t[(k + 1) % 3], t[k])];
                if group[nb] == usize::MAX && normals[nb].dot(&normals[seed]) >= cos_limit {
                    group[nb] = gid;
                    members.push(nb);
                    queue.push_back(nb);
                }
            }
        }
        groups.push(members);
    }

    let mut faces = Vec::with_capacity(groups.len());
    for members in &groups {
        // Directed boundary edges of the group: next vertex after each start.
        let gid = group[members[0]];
        let mut next: BTreeMap<usize, usize> = BTreeMap::new();
        let mut area_vec = Vector3::zeros();
        for &ti in members {
            let t = tris[ti];
            area_vec += (points[t[1]] - points[t[0]]).cross(&(points[t[2]] - points[t[0]]));
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                if group[owner[&(b, a)]] != gid {
                    next.insert(a, b);
                }
            }
        }
        let start = *next.keys().next().expect("group has a boundary");
        let mut loop_ = vec![start];
        let mut cur = next[&start];
        while cur != start {
            loop_.push(cur);
            cur = next[&cur];
            if loop_.len() > next.len() {
                return Err(Error::DegenerateInput("hull face boundary is not a simple loop".into()));
            }
        }
        faces.push((loop_, area_vec));
    }

    // Drop vertices lying on a straight boundary run.
    let collinear = |a: &Point3<f64>, b: &Point3<f64>, c: &Point3<f64>| {
        let u = b - a;
        let v = c - b;
        u.cross(&v).norm() <= eps * (u.norm() + v.norm())
    };
    let mut hull_faces = Vec::with_capacity(faces.len());
    for (loop_, area_vec) in faces {
        let n = loop_.len();
        let kept: Vec<usize> = (0..n)
            .filter(|&i| {
                let prev = points[loop_[(i + n - 1) % n]];
                let next = points[loop_[(i + 1) % n]];
                !collinear(&prev, &points[loop_[i]], &next)
            })
            .map(|i| loop_[i])
            .collect();
        let normal = area_vec.normalize();
        let offset = kept
            .iter()
            .map(|&i| normal.dot(&points[i].coords))
            .fold(f64::NEG_INFINITY, f64::max);
        let (area, centroid) = polygon_area_centroid(points, &kept, &normal);
        hull_faces.push(HullFace {
            vertices: kept,
            normal,
            offset,
            area,
            centroid,
        });
    }

    let mut edge_faces: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (fi, f) in hull_faces.iter().enumerate() {
        let n = f.vertices.len();
        for k in 0..n {
            let (a, b) = (f.vertices[k], f.vertices[(k + 1) % n]);
            edge_faces.entry((a.min(b), a.max(b))).or_default().push(fi);
        }
    }
    let mut edges = Vec::with_capacity(edge_faces.len());
    for ((a, b), fs) in edge_faces {
        if fs.len() != 2 {
            return Err(Error::DegenerateInput(format!(
                "hull edge ({a}, {b}) borders {} faces",
                fs.len()
            )));
        }
        edges.push(HullEdge {
            a,
            b,
            faces: [fs[0], fs[1]],
        });
    }
    let vertices: BTreeSet<usize> = hull_faces.iter().flat_map(|f| f.vertices.iter().copied()).collect();
    Ok(ConvexHull {
        points: Vec::new(),
        vertices: vertices.into_iter().collect(),
        faces: hull_faces,
        edges,
    })
}

/// Area and area centroid of a planar polygon given by point indices.
pub(crate) fn polygon_area_centroid(
    points: &[Point3<f64>],
    poly: &[usize],
    normal: &Vector3<f64>,
) -> (f64, Point3<f64>) {
    let p0 = points[poly[0]];
    let mut area = 0.0;
    let mut acc = Vector3::zeros();
    for k in 1..poly.len().saturating_sub(1) {
        let (a, b) = (points[poly[k]], points[poly[k + 1]]);
        let tri_area = 0.5 * (a - p0).cross(&(b - p0)).dot(normal);
        area += tri_area;
        acc += tri_area * (p0.coords + a.coords + b.coords) / 3.0;
    }
    if area.abs() < f64::MIN_POSITIVE {
        return (0.0, p0);
    }
    (area, Point3::from(acc / area))
}
