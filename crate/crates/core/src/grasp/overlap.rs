//! Convex polygon clipping in the plane.

use nalgebra::Point2;

fn cross(o: &Point2<f64>, a: &Point2<f64>, b: &Point2<f64>) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Intersection of `subject` with the convex, counter-clockwise `clip`
/// polygon (Sutherland–Hodgman).
pub fn clip_convex(subject: &[Point2<f64>], clip: &[Point2<f64>]) -> Vec<Point2<f64>> {
    let mut out = subject.to_vec();
    for i in 0..clip.len() {
        if out.is_empty() {
            break;
        }
        let (a, b) = (clip[i], clip[(i + 1) % clip.len()]);
        let input = std::mem::take(&mut out);
        for k in 0..input.len() {
            let p = input[k];
            let q = input[(k + 1) % input.len()];
            let sp = cross(&a, &b, &p);
            let sq = cross(&a, &b, &q);
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                out.push(p + (q - p) * t);
            }
        }
    }
    out
}

/// Signed area and area centroid; `None` for a degenerate polygon.
pub fn polygon_area_centroid_2d(poly: &[Point2<f64>]) -> Option<(f64, Point2<f64>)> {
    if poly.len() < 3 {
        return None;
    }
    let o = poly[0];
    let (mut area, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for k in 1..poly.len() - 1 {
        let a = cross(&o, &poly[k], &poly[k + 1]) * 0.5;
        area += a;
        cx += a * (o.x + poly[k].x + poly[k + 1].x) / 3.0;
        cy += a * (o.y + poly[k].y + poly[k + 1].y) / 3.0;
    }
    (area.abs() > 0.0).then(|| (area, Point2::new(cx / area, cy / area)))
}

pub(crate) fn point_in_convex(p: &Point2<f64>, poly: &[Point2<f64>], eps: f64) -> bool {
    (0..poly.len()).all(|i| cross(&poly[i], &poly[(i + 1) % poly.len()], p) >= -eps)
}
