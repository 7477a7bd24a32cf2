//! Intersection area of two spherical rectangles and the IoU built on it.
//!
//! The overlap of two rectangles is a convex spherical polygon whose corners
//! are drawn from two pools: pairwise crossings of the side planes, and the
//! corners of each rectangle that fall inside the other. Once the pooled
//! points are filtered, merged and ordered, the polygon's area follows from
//! its interior angles (spherical excess).

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::polygon::{interior_angle, ON_PLANE_EPS};
use super::rect::{rect_vertices, Side, SphericalRect};
use super::vector::{UnitVec3, Vec3};

/// Two points closer than this (radians) are the same polygon corner.
pub const DEDUP_EPS: f64 = 1e-9;

/// Plane pairs with a shorter cross product are treated as parallel.
const PARALLEL_EPS: f64 = 1e-12;

/// A point where a side of `b1` meets a side of `b2`, inside both rectangles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeCrossing {
    pub point: UnitVec3,
    pub side1: Side,
    pub side2: Side,
}

/// For each of the 16 side-plane pairs, tests both antipodal crossing
/// candidates and keeps the ones lying inside both rectangles.
pub fn edge_intersections(b1: &SphericalRect, b2: &SphericalRect) -> Vec<EdgeCrossing> {
    let p1 = b1.boundary();
    let p2 = b2.boundary();
    let mut out = Vec::new();
    for s1 in Side::ALL {
        for s2 in Side::ALL {
            let raw = p1.get(s1).cross(p2.get(s2));
            if raw.norm() < PARALLEL_EPS {
                continue;
            }
            let Some(c) = raw.normalized() else { continue };
            for point in [c, c.antipode()] {
                if p1.contains(point) && p2.contains(point) {
                    out.push(EdgeCrossing {
                        point,
                        side1: s1,
                        side2: s2,
                    });
                }
            }
        }
    }
    out
}

/// Which branch of the area computation produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OverlapKind {
    /// The rectangles do not overlap.
    Disjoint,
    /// One rectangle lies inside the other.
    Contained,
    /// Only one or two boundary points are shared; the overlap has no area.
    Tangential,
    /// A proper overlap bounded by a spherical polygon with this many corners.
    Polygon(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intersection {
    pub area: f64,
    pub kind: OverlapKind,
}

impl Intersection {
    /// Set when the overlap collapsed to isolated boundary points.
    pub fn is_numerically_degenerate(&self) -> bool {
        self.kind == OverlapKind::Tangential
    }
}

/// Area of `b1 ∩ b2` in steradians.
pub fn intersection_area(b1: &SphericalRect, b2: &SphericalRect) -> f64 {
    intersect(b1, b2).area
}

/// IoU of two spherical rectangles, in `[0, 1]`.
pub fn iou(b1: &SphericalRect, b2: &SphericalRect) -> f64 {
    let inter = intersect(b1, b2).area;
    if inter <= 0.0 {
        return 0.0;
    }
    let union = b1.area() + b2.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}

/// Row-parallel IoU matrix; entry `(i, j)` is bit-identical to `iou(&a[i], &b[j])`.
pub fn iou_matrix(a: &[SphericalRect], b: &[SphericalRect]) -> Vec<Vec<f64>> {
    a.par_iter()
        .map(|ra| b.iter().map(|rb| iou(ra, rb)).collect())
        .collect()
}

/// A pooled corner candidate and the side planes it lies on (bit `k` is
/// side `k` of `b1`, bit `4 + k` side `k` of `b2`).
#[derive(Clone, Copy)]
struct Corner {
    p: UnitVec3,
    planes: u8,
}

/// Full intersection computation with the branch that produced it.
pub fn intersect(b1: &SphericalRect, b2: &SphericalRect) -> Intersection {
    // a fixed argument order makes the result exactly symmetric
    let (b1, b2) = if b2.total_cmp(b1).is_lt() {
        (b2, b1)
    } else {
        (b1, b2)
    };
    let a1 = b1.area();
    let a2 = b2.area();
    if b1 == b2 {
        return Intersection {
            area: a1,
            kind: OverlapKind::Contained,
        };
    }
    // bounding caps cannot touch
    if b1.center().angle_to(b2.center()) > b1.circumradius() + b2.circumradius() + 1e-9 {
        return disjoint();
    }
    if b1.is_hemisphere() && b2.is_hemisphere() {
        // two hemispheres meet in a lune
        let psi = b1.center().angle_to(b2.center());
        let area = 2.0 * (PI - psi);
        return Intersection {
            area,
            kind: if area > 0.0 {
                OverlapKind::Polygon(2)
            } else {
                OverlapKind::Disjoint
            },
        };
    }

    let bp1 = b1.boundary();
    let bp2 = b2.boundary();
    let planes: [UnitVec3; 8] = {
        let x = bp1.as_array();
        let y = bp2.as_array();
        [x[0], x[1], x[2], x[3], y[0], y[1], y[2], y[3]]
    };
    let inside_both = |p: UnitVec3| bp1.contains(p) && bp2.contains(p);

    let mut corners: Vec<Corner> = Vec::with_capacity(40);
    let mut crossings = 0usize;
    for i in 0..4 {
        for j in 4..8 {
            let raw = planes[i].cross(planes[j]);
            if raw.norm() < PARALLEL_EPS {
                continue;
            }
            let Some(c) = raw.normalized() else { continue };
            for p in [c, c.antipode()] {
                if inside_both(p) {
                    corners.push(Corner {
                        p,
                        planes: (1 << i) | (1 << j),
                    });
                    crossings += 1;
                }
            }
        }
    }

    let v1 = rect_vertices(b1).ok();
    let v2 = rect_vertices(b2).ok();
    let mut v1_inside = 0usize;
    let mut v2_inside = 0usize;
    if let Some(v) = v1 {
        for (k, p) in v.iter().enumerate() {
            if bp2.contains(*p) {
                v1_inside += 1;
                corners.push(Corner {
                    p: *p,
                    planes: (1 << k) | (1 << ((k + 1) % 4)),
                });
            }
        }
    }
    if let Some(v) = v2 {
        for (k, p) in v.iter().enumerate() {
            if bp1.contains(*p) {
                v2_inside += 1;
                corners.push(Corner {
                    p: *p,
                    planes: (1 << (4 + k)) | (1 << (4 + (k + 1) % 4)),
                });
            }
        }
    }

    if corners.is_empty() {
        return disjoint();
    }
    let only_own_corners = |v: &Option<[UnitVec3; 4]>| {
        v.is_some_and(|v| {
            corners[..crossings]
                .iter()
                .all(|c| v.iter().any(|q| q.angle_to(c.p) < DEDUP_EPS))
        })
    };
    if v1_inside == 4 && only_own_corners(&v1) {
        return contained(a1.min(a2));
    }
    if v2_inside == 4 && only_own_corners(&v2) {
        return contained(a1.min(a2));
    }

    let mut merged = dedup(&corners);
    if merged.len() < 3 {
        return Intersection {
            area: 0.0,
            kind: OverlapKind::Tangential,
        };
    }
    // record every plane a merged corner touches, not only the generating pair
    for c in merged.iter_mut() {
        for (k, n) in planes.iter().enumerate() {
            if c.p.dot(*n).abs() < ON_PLANE_EPS {
                c.planes |= 1 << k;
            }
        }
    }

    let centroid = merged
        .iter()
        .fold(Vec3::default(), |acc, c| acc + c.p.as_vec())
        .normalized();
    let Some(centroid) = centroid else {
        // corners summing to zero span a full great circle: no interior
        return Intersection {
            area: 0.0,
            kind: OverlapKind::Tangential,
        };
    };
    let (e1, e2) = tangent_basis(centroid);
    let angle_of = |p: UnitVec3| p.as_vec().dot(e2).atan2(p.as_vec().dot(e1));
    let mut ordered: Vec<(f64, Corner)> = merged.iter().map(|c| (angle_of(c.p), *c)).collect();
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0));

    let n = ordered.len();
    let mut edge_planes = Vec::with_capacity(n);
    for i in 0..n {
        let (ta, a) = ordered[i];
        let (tb, b) = ordered[(i + 1) % n];
        let tb = if i + 1 == n { tb + 2.0 * PI } else { tb };
        edge_planes.push(edge_plane(a, b, 0.5 * (ta + tb), &planes, centroid, e1, e2));
    }

    let angle_sum: f64 = (0..n)
        .map(|i| interior_angle(edge_planes[(i + n - 1) % n], edge_planes[i]))
        .sum();
    let area = (angle_sum - (n as f64 - 2.0) * PI).clamp(0.0, a1.min(a2));
    Intersection {
        area,
        kind: OverlapKind::Polygon(n),
    }
}

fn disjoint() -> Intersection {
    Intersection {
        area: 0.0,
        kind: OverlapKind::Disjoint,
    }
}

fn contained(area: f64) -> Intersection {
    Intersection {
        area,
        kind: OverlapKind::Contained,
    }
}

/// Merges corners closer than [`DEDUP_EPS`], uniting their plane sets.
fn dedup(corners: &[Corner]) -> Vec<Corner> {
    let mut out: Vec<Corner> = Vec::with_capacity(corners.len());
    for c in corners {
        match out.iter_mut().find(|o| o.p.angle_to(c.p) < DEDUP_EPS) {
            Some(o) => o.planes |= c.planes,
            None => out.push(*c),
        }
    }
    out
}

/// Orthonormal tangent basis at `c` with `e1 × e2 = c`, so increasing
/// `atan2(p·e2, p·e1)` runs counter-clockwise seen from outside.
fn tangent_basis(c: UnitVec3) -> (Vec3, Vec3) {
    let (ax, ay, az) = (c.x().abs(), c.y().abs(), c.z().abs());
    let axis = if ax <= ay && ax <= az {
        Vec3::new(1.0, 0.0, 0.0)
    } else if ay <= az {
        Vec3::new(0.0, 1.0, 0.0)
    } else {
        Vec3::new(0.0, 0.0, 1.0)
    };
    let e1 = c.as_vec().cross(axis).normalized().expect("axis chosen off c");
    let e2 = c.as_vec().cross(e1.as_vec());
    (e1.as_vec(), e2)
}

/// Picks the side plane carrying the polygon edge from `a` to `b`.
///
/// Normally the two corners share exactly one great circle. Antipodal
/// corners (possible only with a field of view of exactly π) share several;
/// then the edge belongs to the plane first hit when walking from the
/// centroid towards the middle of the angular sector between them.
fn edge_plane(
    a: Corner,
    b: Corner,
    mid_angle: f64,
    planes: &[UnitVec3; 8],
    centroid: UnitVec3,
    e1: Vec3,
    e2: Vec3,
) -> UnitVec3 {
    let common = a.planes & b.planes;
    let mut chosen: Option<UnitVec3> = None;
    let mut ambiguous = false;
    for (k, n) in planes.iter().enumerate() {
        if common & (1 << k) == 0 {
            continue;
        }
        match chosen {
            None => chosen = Some(*n),
            Some(prev) if prev.cross(*n).norm() > 1e-9 => ambiguous = true,
            Some(_) => {}
        }
    }
    match (chosen, ambiguous) {
        (Some(n), false) => n,
        (Some(_), true) => {
            let (s, c) = mid_angle.sin_cos();
            let d = e1 * c + e2 * s;
            planes
                .iter()
                .enumerate()
                .filter(|(k, n)| common & (1 << k) != 0 && n.as_vec().dot(d) < 0.0)
                .map(|(_, n)| (n.dot(centroid).atan2(-n.as_vec().dot(d)), *n))
                .min_by(|x, y| x.0.total_cmp(&y.0))
                .map(|(_, n)| n)
                .unwrap_or(planes[common.trailing_zeros() as usize])
        }
        (None, _) => {
            // no shared plane survived the tolerance: take the best fit
            *planes
                .iter()
                .min_by(|x, y| {
                    let rx = a.p.dot(**x).abs().max(b.p.dot(**x).abs());
                    let ry = a.p.dot(**y).abs().max(b.p.dot(**y).abs());
                    rx.total_cmp(&ry)
                })
                .expect("eight planes")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn rect(t: f64, p: f64, a: f64, b: f64) -> SphericalRect {
        SphericalRect::new(t, p, a, b).unwrap()
    }

    #[test]
    fn identical_rects() {
        let b = rect(1.0, 1.0, 0.7, 0.3);
        assert_eq!(intersection_area(&b, &b), b.area());
        assert_eq!(iou(&b, &b), 1.0);
        let crossings = edge_intersections(&b, &b);
        for v in rect_vertices(&b).unwrap() {
            assert!(crossings.iter().any(|c| c.point.angle_to(v) < 1e-12));
        }
    }

    #[test]
    fn disjoint_rects() {
        let b1 = rect(0.0, FRAC_PI_2, 1.0, 1.0);
        let b2 = rect(2.5, FRAC_PI_2, 1.0, 1.0);
        assert!(edge_intersections(&b1, &b2).is_empty());
        let r = intersect(&b1, &b2);
        assert_eq!(r.kind, OverlapKind::Disjoint);
        assert_eq!(iou(&b1, &b2), 0.0);
    }

    #[test]
    fn nested_rects_take_containment_branch() {
        let small = rect(3.0, 2.0, 0.4, 0.3);
        let big = rect(3.0, 2.0, 0.9, 0.8);
        let r = intersect(&small, &big);
        assert_eq!(r.kind, OverlapKind::Contained);
        assert_eq!(r.area, small.area());
    }

    #[test]
    fn concentric_iou_hand_value() {
        let a = rect(0.0, FRAC_PI_2, FRAC_PI_3, FRAC_PI_3);
        let b = rect(0.0, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2);
        let expect = (4.0 * (-0.25f64).acos() - 2.0 * PI) / (2.0 * PI / 3.0);
        assert!((iou(&a, &b) - expect).abs() < 1e-12);
        assert!((expect - 0.4826).abs() < 1e-4);
    }

    #[test]
    fn side_by_side_overlap_is_a_hexagon() {
        let b1 = rect(0.0, FRAC_PI_2, 1.0, 1.0);
        let b2 = rect(0.6, FRAC_PI_2, 1.0, 1.0);
        let r = intersect(&b1, &b2);
        assert_eq!(r.kind, OverlapKind::Polygon(6));
        assert!(r.area > 0.0 && r.area < b1.area());
    }

    #[test]
    fn hemispheres() {
        let h1 = rect(0.0, FRAC_PI_2, PI, PI);
        let h2 = rect(FRAC_PI_2, FRAC_PI_2, PI, PI);
        assert!((intersection_area(&h1, &h2) - PI).abs() < 1e-12);
        // a small box inside a hemisphere is fully covered
        let small = rect(0.1, 1.4, 0.3, 0.2);
        assert!((intersection_area(&h1, &small) - small.area()).abs() < 1e-12);
    }

    #[test]
    fn matrix_matches_scalar_calls() {
        let a = vec![rect(0.0, 1.0, 0.5, 0.5), rect(0.2, 1.1, 0.6, 0.4)];
        let b = vec![rect(0.1, 1.0, 0.5, 0.7), rect(4.0, 2.0, 0.3, 0.3), a[0]];
        let m = iou_matrix(&a, &b);
        for (i, ra) in a.iter().enumerate() {
            for (j, rb) in b.iter().enumerate() {
                assert_eq!(m[i][j].to_bits(), iou(ra, rb).to_bits());
            }
        }
        assert_eq!(iou_matrix(&[a[0]], &[a[0]]), vec![vec![1.0]]);
    }

    #[test]
    fn touching_along_an_edge_has_zero_area() {
        // equator boxes sharing the meridian θ = 0.5
        let b1 = rect(0.0, FRAC_PI_2, 1.0, 0.6);
        let b2 = rect(1.0, FRAC_PI_2, 1.0, 0.6);
        let r = intersect(&b1, &b2);
        assert!(r.area.abs() < 1e-12, "{r:?}");
    }
}
