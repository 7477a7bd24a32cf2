//! Planar primitives used by the ERP-space criteria: interval overlap on a
//! periodic axis, circle lens areas and general simple-polygon intersection.

use std::f64::consts::PI;

/// Largest overlap of `[a0, a1]` with `[b0, b1]` shifted by any of
/// `{−period, 0, period}`.
pub fn periodic_overlap(a0: f64, a1: f64, b0: f64, b1: f64, period: f64) -> f64 {
    [-period, 0.0, period]
        .iter()
        .map(|s| (a1.min(b1 + s) - a0.max(b0 + s)).max(0.0))
        .fold(0.0, f64::max)
}

/// Area of the intersection of two disks at center distance `d`.
pub fn circle_intersection_area(r1: f64, r2: f64, d: f64) -> f64 {
    if r1 <= 0.0 || r2 <= 0.0 || d >= r1 + r2 {
        return 0.0;
    }
    if d <= (r1 - r2).abs() {
        let r = r1.min(r2);
        return PI * r * r;
    }
    let c1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1)).clamp(-1.0, 1.0);
    let c2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2)).clamp(-1.0, 1.0);
    let k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    r1 * r1 * c1.acos() + r2 * r2 * c2.acos() - 0.5 * k.max(0.0).sqrt()
}

pub type Point = (f64, f64);

/// Shoelace signed area; positive for counter-clockwise in a y-up frame.
pub fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        s += a.0 * b.1 - b.0 * a.1;
    }
    0.5 * s
}

/// Reverses `poly` if needed so that its signed area is non-negative.
pub fn make_ccw(mut poly: Vec<Point>) -> Vec<Point> {
    if signed_area(&poly) < 0.0 {
        poly.reverse();
    }
    poly
}

const ON_EDGE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Location {
    Inside,
    /// On an edge of the polygon, with that edge's direction.
    Boundary(f64, f64),
    Outside,
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

fn locate(p: Point, poly: &[Point], eps: f64) -> Location {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if point_segment_distance(p, a, b) <= eps {
            return Location::Boundary(b.0 - a.0, b.1 - a.1);
        }
        if (a.1 > p.1) != (b.1 > p.1) {
            let x = a.0 + (p.1 - a.1) / (b.1 - a.1) * (b.0 - a.0);
            if p.0 < x {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// Parameters in `(0, 1)` where segment `a→b` meets the boundary of `poly`,
/// including where vertices of `poly` touch it.
fn split_params(a: Point, b: Point, poly: &[Point], eps: f64, out: &mut Vec<f64>) {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return;
    }
    let n = poly.len();
    for i in 0..n {
        let (c, d) = (poly[i], poly[(i + 1) % n]);
        let (ex, ey) = (d.0 - c.0, d.1 - c.1);
        let denom = dx * ey - dy * ex;
        if denom != 0.0 {
            let t = ((c.0 - a.0) * ey - (c.1 - a.1) * ex) / denom;
            let u = ((c.0 - a.0) * dy - (c.1 - a.1) * dx) / denom;
            if t > 0.0 && t < 1.0 && (-1e-12..=1.0 + 1e-12).contains(&u) {
                out.push(t);
            }
        }
        if point_segment_distance(c, a, b) <= eps {
            let t = ((c.0 - a.0) * dx + (c.1 - a.1) * dy) / len2;
            if t > 0.0 && t < 1.0 {
                out.push(t);
            }
        }
    }
}

/// Green's-theorem contribution `½∮(x dy − y dx)` of the parts of `p`'s
/// boundary that lie inside `q`. With `keep_shared`, stretches running along
/// `q`'s boundary in the same direction count too; opposite-running stretches
/// separate the two interiors and never count.
fn boundary_integral_inside(p: &[Point], q: &[Point], keep_shared: bool, eps: f64) -> f64 {
    let n = p.len();
    let mut acc = 0.0;
    let mut ts = Vec::new();
    for i in 0..n {
        let (a, b) = (p[i], p[(i + 1) % n]);
        ts.clear();
        ts.push(0.0);
        ts.push(1.0);
        split_params(a, b, q, eps, &mut ts);
        ts.sort_by(f64::total_cmp);
        for w in ts.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            if t1 - t0 <= 0.0 {
                continue;
            }
            let at = |t: f64| (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
            let keep = match locate(at(0.5 * (t0 + t1)), q, eps) {
                Location::Inside => true,
                Location::Boundary(ex, ey) => {
                    keep_shared && ex * (b.0 - a.0) + ey * (b.1 - a.1) > 0.0
                }
                Location::Outside => false,
            };
            if keep {
                let (s, e) = (at(t0), at(t1));
                acc += s.0 * e.1 - e.0 * s.1;
            }
        }
    }
    0.5 * acc
}

/// Area of the intersection of two simple polygons (either orientation).
///
/// The intersection boundary is the part of each boundary lying inside the
/// other polygon; summing the boundary integral over those pieces gives the
/// area without building the clipped polygon. Shared boundary stretches are
/// counted from `p` only.
pub fn polygon_intersection_area(p: &[Point], q: &[Point]) -> f64 {
    if p.len() < 3 || q.len() < 3 {
        return 0.0;
    }
    let p = make_ccw(p.to_vec());
    let q = make_ccw(q.to_vec());
    let scale = p
        .iter()
        .chain(q.iter())
        .fold(1.0f64, |m, v| m.max(v.0.abs()).max(v.1.abs()));
    let eps = ON_EDGE_EPS * scale;
    let a = boundary_integral_inside(&p, &q, true, eps) + boundary_integral_inside(&q, &p, false, eps);
    a.max(0.0)
}
