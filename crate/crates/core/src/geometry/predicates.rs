use nalgebra::{Point3, Vector3};

use super::mesh::Mesh;

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy)]
pub struct Aabb {
    pub min: Point3<f64>,
    pub max: Point3<f64>,
}

impl Aabb {
    pub fn of_points<'a>(pts: impl IntoIterator<Item = &'a Point3<f64>>) -> Aabb {
        let mut it = pts.into_iter();
        let first = *it.next().expect("at least one point");
        let mut bb = Aabb {
            min: first,
            max: first,
        };
        for p in it {
            bb.min = bb.min.inf(p);
            bb.max = bb.max.sup(p);
        }
        bb
    }

    pub fn overlaps(&self, other: &Aabb, pad: f64) -> bool {
        (0..3).all(|k| self.min[k] <= other.max[k] + pad && other.min[k] <= self.max[k] + pad)
    }
}

/// Triangle bounding boxes for cheap rejection in segment and box queries.
#[derive(Debug, Clone)]
pub struct TriangleBounds {
    boxes: Vec<Aabb>,
}

impl TriangleBounds {
    pub fn new(mesh: &Mesh) -> Self {
        let boxes = (0..mesh.triangles().len())
            .map(|i| Aabb::of_points(mesh.triangle(i).iter()))
            .collect();
        TriangleBounds { boxes }
    }

    pub fn candidates<'a>(&'a self, query: &'a Aabb, pad: f64) -> impl Iterator<Item = usize> + 'a {
        self.boxes
            .iter()
            .enumerate()
            .filter(move |(_, b)| b.overlaps(query, pad))
            .map(|(i, _)| i)
    }
}

fn orient(a: &Point3<f64>, b: &Point3<f64>, c: &Point3<f64>, d: &Point3<f64>) -> f64 {
    (b - a).cross(&(c - a)).dot(&(d - a))
}

/// Intersection point of segment `pq` with triangle `abc`, using signed
/// tetrahedron volumes. Segments lying in the triangle's plane report no hit.
pub fn segment_triangle_intersection(
    p: &Point3<f64>,
    q: &Point3<f64>,
    tri: &[Point3<f64>; 3],
) -> Option<Point3<f64>> {
    let [a, b, c] = tri;
    let sp = orient(a, b, c, p);
    let sq = orient(a, b, c, q);
    if (sp > 0.0 && sq > 0.0) || (sp < 0.0 && sq < 0.0) || (sp == 0.0 && sq == 0.0) {
        return None;
    }
    // Which side of each edge the segment's line passes.
    let e1 = orient(p, q, a, b);
    let e2 = orient(p, q, b, c);
    let e3 = orient(p, q, c, a);
    let all_nonneg = e1 >= 0.0 && e2 >= 0.0 && e3 >= 0.0;
    let all_nonpos = e1 <= 0.0 && e2 <= 0.0 && e3 <= 0.0;
    if !(all_nonneg || all_nonpos) {
        return None;
    }
    let t = sp / (sp - sq);
    Some(p + (q - p) * t)
}

/// Whether segment `ab` crosses the mesh surface anywhere farther than
/// `exclude_radius` from `exclude_center`.
pub fn segment_intersects_mesh(
    a: &Point3<f64>,
    b: &Point3<f64>,
    mesh: &Mesh,
    exclude_radius: f64,
    exclude_center: &Point3<f64>,
) -> bool {
    segment_intersects_mesh_with(a, b, mesh, None, exclude_radius, exclude_center)
}

pub fn segment_intersects_mesh_with(
    a: &Point3<f64>,
    b: &Point3<f64>,
    mesh: &Mesh,
    bounds: Option<&TriangleBounds>,
    exclude_radius: f64,
    exclude_center: &Point3<f64>,
) -> bool {
    let hits = |i: usize| {
        segment_triangle_intersection(a, b, &mesh.triangle(i))
            .is_some_and(|x| (x - exclude_center).norm() > exclude_radius)
    };
    match bounds {
        Some(bb) => {
            let query = Aabb::of_points([a, b]);
            let mut cands = bb.candidates(&query, 0.0);
            cands.any(hits)
        }
        None => (0..mesh.triangles().len()).any(hits),
    }
}

/// Barycentric coordinates of `p` projected along the triangle normal.
pub fn projected_barycentric(
    p: &Point3<f64>,
    t1: &Point3<f64>,
    t2: &Point3<f64>,
    t3: &Point3<f64>,
) -> Option<[f64; 3]> {
    let n = (t2 - t1).cross(&(t3 - t1));
    let nn = n.norm_squared();
    if nn <= f64::MIN_POSITIVE {
        return None;
    }
    let w1 = (t3 - t2).cross(&(p - t2)).dot(&n) / nn;
    let w2 = (t1 - t3).cross(&(p - t3)).dot(&n) / nn;
    Some([w1, w2, 1.0 - w1 - w2])
}

/// True when `p`, projected onto the plane of the triangle, has every
/// barycentric coordinate at least `margin`.
pub fn point_in_triangle_projection(
    p: &Point3<f64>,
    t1: &Point3<f64>,
    t2: &Point3<f64>,
    t3: &Point3<f64>,
    margin: f64,
) -> bool {
    // A tiny slack keeps exact-boundary cases (margin 0 on an edge) inside.
    const SLACK: f64 = 1e-12;
    projected_barycentric(p, t1, t2, t3).is_some_and(|w| w.iter().all(|&c| c >= margin - SLACK))
}

/// Gap, in meters, below which a box and a triangle count as touching.
pub const TOUCH_GAP: f64 = 1e-9;

/// Oriented box: center, orthonormal axes, half extents.
#[derive(Debug, Clone, Copy)]
pub struct OrientedBox {
    pub center: Point3<f64>,
    pub axes: [Vector3<f64>; 3],
    pub half: [f64; 3],
}

impl OrientedBox {
    pub fn corners(&self) -> [Point3<f64>; 8] {
        let mut out = [self.center; 8];
        for (i, c) in out.iter_mut().enumerate() {
            for k in 0..3 {
                let s = if i >> k & 1 == 1 { 1.0 } else { -1.0 };
                *c += self.axes[k] * (s * self.half[k]);
            }
        }
        out
    }

    pub fn aabb(&self) -> Aabb {
        Aabb::of_points(self.corners().iter())
    }

    pub fn contains(&self, p: &Point3<f64>) -> bool {
        let d = p - self.center;
        (0..3).all(|k| d.dot(&self.axes[k]).abs() <= self.half[k])
    }

    fn radius_along(&self, axis: &Vector3<f64>) -> f64 {
        (0..3)
            .map(|k| self.half[k] * self.axes[k].dot(axis).abs())
            .sum()
    }

    /// Separating-axis test against a triangle. Touching counts as
    /// intersecting: separation needs a gap wider than [`TOUCH_GAP`], so
    /// flush contact gives the same answer in every frame.
    pub fn intersects_triangle(&self, tri: &[Point3<f64>; 3]) -> bool {
        let v = [tri[0] - self.center, tri[1] - self.center, tri[2] - self.center];
        let edges = [v[1] - v[0], v[2] - v[1], v[0] - v[2]];
        let separated = |axis: &Vector3<f64>| {
            if axis.norm_squared() < 1e-24 {
                return false;
            }
            let p = [axis.dot(&v[0]), axis.dot(&v[1]), axis.dot(&v[2])];
            let lo = p[0].min(p[1]).min(p[2]);
            let hi = p[0].max(p[1]).max(p[2]);
            let r = self.radius_along(axis) + TOUCH_GAP * axis.norm();
            lo > r || hi < -r
        };
        for a in &self.axes {
            if separated(a) {
                return false;
            }
        }
        if separated(&edges[0].cross(&edges[1])) {
            return false;
        }
        for a in &self.axes {
            for e in &edges {
                if separated(&a.cross(e)) {
                    return false;
                }
            }
        }
        true
    }

    /// Slab test for segment `pq`.
    pub fn intersects_segment(&self, p: &Point3<f64>, q: &Point3<f64>) -> bool {
        let d = q - p;
        let o = p - self.center;
        let (mut t0, mut t1) = (0.0_f64, 1.0_f64);
        for k in 0..3 {
            let od = o.dot(&self.axes[k]);
            let dd = d.dot(&self.axes[k]);
            if dd.abs() < 1e-300 {
                if od.abs() > self.half[k] {
                    return false;
                }
                continue;
            }
            let mut ta = (-self.half[k] - od) / dd;
            let mut tb = (self.half[k] - od) / dd;
            if ta > tb {
                std::mem::swap(&mut ta, &mut tb);
            }
            t0 = t0.max(ta);
            t1 = t1.min(tb);
            if t0 > t1 {
                return false;
            }
        }
        true
    }
}

/// Ray-parity inside test along a fixed, slightly skewed direction.
pub fn point_in_mesh(p: &Point3<f64>, mesh: &Mesh) -> bool {
    let dir = Vector3::new(0.5773, 0.5774, 0.5775).normalize();
    let far = p + dir * (mesh.scale() * 4.0 + 1.0);
    let crossings = (0..mesh.triangles().len())
        .filter(|&i| segment_triangle_intersection(p, &far, &mesh.triangle(i)).is_some())
        .count();
    crossings % 2 == 1
}

pub fn box_intersects_mesh(b: &OrientedBox, mesh: &Mesh, bounds: Option<&TriangleBounds>) -> bool {
    let hit = |i: usize| b.intersects_triangle(&mesh.triangle(i));
    let touches = match bounds {
        Some(bb) => {
            let q = b.aabb();
            let mut c = bb.candidates(&q, 0.0);
            c.any(hit)
        }
        None => (0..mesh.triangles().len()).any(hit),
    };
    touches || point_in_mesh(&b.center, mesh)
}

/// Distance from `p` to segment `ab`.
pub fn point_segment_distance(p: &Point3<f64>, a: &Point3<f64>, b: &Point3<f64>) -> f64 {
    let ab = b - a;
    let t = ((p - a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance from `p` to the infinite line through `a` and `b`.
pub fn point_line_distance(p: &Point3<f64>, a: &Point3<f64>, b: &Point3<f64>) -> f64 {
    let d = (b - a).normalize();
    (p - a).cross(&d).norm()
}
