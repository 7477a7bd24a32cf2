use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::vector::{local_frame, sph_to_vec, wrap_azimuth, Frame, UnitVec3};
use super::GeometryError;

/// Slack for closed-region membership tests on plane dot products.
pub const CONTAINMENT_EPS: f64 = 1e-10;

/// A spherical rectangle: the region cut from the unit sphere by the four
/// side planes of a viewing frustum whose apex is the sphere centre.
///
/// `theta` is the azimuth of the centre in `[0, 2π)`, `phi` its polar angle
/// in `[0, π]` (0 is the north pole), `alpha`/`beta` the horizontal and
/// vertical fields of view in `(0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RectParams", into = "RectParams")]
pub struct SphericalRect {
    theta: f64,
    phi: f64,
    alpha: f64,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
struct RectParams {
    theta: f64,
    phi: f64,
    alpha: f64,
    beta: f64,
}

impl TryFrom<RectParams> for SphericalRect {
    type Error = GeometryError;
    fn try_from(p: RectParams) -> Result<Self, Self::Error> {
        SphericalRect::new(p.theta, p.phi, p.alpha, p.beta)
    }
}

impl From<SphericalRect> for RectParams {
    fn from(r: SphericalRect) -> Self {
        RectParams {
            theta: r.theta,
            phi: r.phi,
            alpha: r.alpha,
            beta: r.beta,
        }
    }
}

impl SphericalRect {
    /// Strict constructor: every parameter must already be in its canonical range.
    pub fn new(theta: f64, phi: f64, alpha: f64, beta: f64) -> Result<Self, GeometryError> {
        let check = |name: &'static str, value: f64, ok: bool| {
            if value.is_finite() && ok {
                Ok(())
            } else {
                Err(GeometryError::OutOfRange { field: name, value })
            }
        };
        check("theta", theta, (0.0..TAU).contains(&theta))?;
        check("phi", phi, (0.0..=PI).contains(&phi))?;
        check("alpha", alpha, alpha > 0.0 && alpha <= PI)?;
        check("beta", beta, beta > 0.0 && beta <= PI)?;
        Ok(Self {
            theta,
            phi,
            alpha,
            beta,
        })
    }

    /// Like [`SphericalRect::new`] but wraps `theta` into `[0, 2π)` first.
    pub fn wrapped(theta: f64, phi: f64, alpha: f64, beta: f64) -> Result<Self, GeometryError> {
        if !theta.is_finite() {
            return Err(GeometryError::OutOfRange {
                field: "theta",
                value: theta,
            });
        }
        Self::new(wrap_azimuth(theta), phi, alpha, beta)
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }
    #[inline]
    pub fn phi(&self) -> f64 {
        self.phi
    }
    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn params(&self) -> [f64; 4] {
        [self.theta, self.phi, self.alpha, self.beta]
    }

    /// Rotates the rectangle about the polar axis.
    pub fn shifted(&self, dtheta: f64) -> Self {
        Self {
            theta: wrap_azimuth(self.theta + dtheta),
            ..*self
        }
    }

    pub fn center(&self) -> UnitVec3 {
        sph_to_vec(self.theta, self.phi)
    }

    pub fn frame(&self) -> Frame {
        local_frame(self.theta, self.phi)
    }

    /// Both fields of view at π: the rectangle degenerates to a hemisphere.
    pub fn is_hemisphere(&self) -> bool {
        self.alpha >= PI && self.beta >= PI
    }

    pub fn area(&self) -> f64 {
        rect_area(self)
    }

    pub fn boundary(&self) -> BoundaryPlanes {
        boundary_normals(self)
    }

    pub fn contains(&self, p: UnitVec3) -> bool {
        self.boundary().contains(p)
    }

    /// Angular radius of the smallest cap around the centre that holds the
    /// rectangle (centre-to-corner distance).
    pub fn circumradius(&self) -> f64 {
        let ta = (self.alpha / 2.0).tan();
        let tb = (self.beta / 2.0).tan();
        let r = ta.hypot(tb).atan();
        if r.is_finite() {
            r
        } else {
            PI / 2.0
        }
    }

    /// Lexicographic total order over the raw parameters.
    pub(crate) fn total_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.theta
            .total_cmp(&other.theta)
            .then(self.phi.total_cmp(&other.phi))
            .then(self.alpha.total_cmp(&other.alpha))
            .then(self.beta.total_cmp(&other.beta))
    }
}

impl fmt::Display for SphericalRect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:.6}, {:.6}, {:.6}, {:.6})",
            self.theta, self.phi, self.alpha, self.beta
        )
    }
}

/// Names one side of a rectangle.
///
/// Sides are named as seen by a camera at the sphere centre looking along
/// `v_look`, so the left side lies towards `+v_right` (increasing azimuth)
/// and the top side towards `+v_up`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Top,
    Right,
    Bottom,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Left, Side::Top, Side::Right, Side::Bottom];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Unit normals of the four side planes, oriented so the rectangle is the
/// set `{p : p·n ≥ 0}` for every normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPlanes {
    pub n_left: UnitVec3,
    pub n_top: UnitVec3,
    pub n_right: UnitVec3,
    pub n_bottom: UnitVec3,
}

impl BoundaryPlanes {
    /// Normals in [`Side::ALL`] order.
    pub fn as_array(&self) -> [UnitVec3; 4] {
        [self.n_left, self.n_top, self.n_right, self.n_bottom]
    }

    pub fn get(&self, side: Side) -> UnitVec3 {
        self.as_array()[side.index()]
    }

    #[inline]
    pub fn contains(&self, p: UnitVec3) -> bool {
        self.as_array().iter().all(|n| p.dot(*n) >= -CONTAINMENT_EPS)
    }
}

pub fn boundary_normals(rect: &SphericalRect) -> BoundaryPlanes {
    let f = rect.frame();
    let (sa, ca) = (rect.alpha / 2.0).sin_cos();
    let (sb, cb) = (rect.beta / 2.0).sin_cos();
    let unit = |v: super::vector::Vec3| {
        // the look/right/up triple is orthonormal, so these are unit up to rounding
        v.normalized().expect("frame combination is never zero")
    };
    BoundaryPlanes {
        n_left: unit(f.world(sa, -ca, 0.0)),
        n_top: unit(f.world(sb, 0.0, -cb)),
        n_right: unit(f.world(sa, ca, 0.0)),
        n_bottom: unit(f.world(sb, 0.0, cb)),
    }
}

/// Solid angle of the rectangle in steradians.
///
/// Evaluates `4·acos(−sin(α/2)·sin(β/2)) − 2π` through the equivalent
/// `4·asin(sin(α/2)·sin(β/2))`, which avoids cancelling against 2π for
/// small boxes.
pub fn rect_area(rect: &SphericalRect) -> f64 {
    fov_area(rect.alpha, rect.beta)
}

/// [`rect_area`] for bare fields of view (no range checks).
pub fn fov_area(alpha: f64, beta: f64) -> f64 {
    let s = (alpha / 2.0).sin() * (beta / 2.0).sin();
    4.0 * s.clamp(-1.0, 1.0).asin()
}

/// Corners in counter-clockwise order as seen from outside the sphere:
/// top-left, top-right, bottom-right, bottom-left.
pub fn rect_vertices(rect: &SphericalRect) -> Result<[UnitVec3; 4], GeometryError> {
    let planes = boundary_normals(rect);
    let n = planes.as_array();
    let mut out = [UnitVec3::Z; 4];
    for (i, slot) in out.iter_mut().enumerate() {
        let a = n[i];
        let b = n[(i + 1) % 4];
        let raw = a.cross(b);
        if raw.norm() <= 1e-12 {
            return Err(GeometryError::DegenerateRect);
        }
        let c = raw.normalized().ok_or(GeometryError::DegenerateRect)?;
        // the vertex must sit on the non-negative side of the other two planes
        let others = n[(i + 2) % 4].dot(c) + n[(i + 3) % 4].dot(c);
        *slot = if others >= 0.0 { c } else { c.antipode() };
    }
    Ok(out)
}

pub fn contains_point(rect: &SphericalRect, p: UnitVec3) -> bool {
    rect.contains(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    #[test]
    fn construction_rejects_out_of_range() {
        assert!(SphericalRect::new(0.0, 1.0, 0.5, 0.5).is_ok());
        assert!(SphericalRect::new(TAU, 1.0, 0.5, 0.5).is_err());
        assert!(SphericalRect::new(-0.1, 1.0, 0.5, 0.5).is_err());
        assert!(SphericalRect::new(0.0, 3.2, 0.5, 0.5).is_err());
        assert!(SphericalRect::new(0.0, 1.0, 0.0, 0.5).is_err());
        assert!(SphericalRect::new(0.0, 1.0, 0.5, 3.15).is_err());
        assert!(SphericalRect::new(f64::NAN, 1.0, 0.5, 0.5).is_err());
        assert!(SphericalRect::wrapped(-0.1, 1.0, 0.5, 0.5).is_ok());
    }

    #[test]
    fn normals_match_hand_values() {
        let r = SphericalRect::new(0.0, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap();
        let p = r.boundary();
        let h = SQRT_2 / 2.0;
        assert!((p.n_left.x() - h).abs() < 1e-15);
        assert!((p.n_left.y() + h).abs() < 1e-15);
        assert!(p.n_left.z().abs() < 1e-15);
        assert!((p.n_top.x() - h).abs() < 1e-15);
        assert!(p.n_top.y().abs() < 1e-15);
        assert!((p.n_top.z() + h).abs() < 1e-15);
    }

    #[test]
    fn centre_dot_normals_is_half_fov_sine() {
        for i in 0..30 {
            let r = SphericalRect::new(
                i as f64 * 0.2,
                0.1 * i as f64,
                0.1 + 0.1 * i as f64,
                3.0 - 0.09 * i as f64,
            )
            .unwrap();
            let c = r.center();
            let p = r.boundary();
            let sa = (r.alpha() / 2.0).sin();
            let sb = (r.beta() / 2.0).sin();
            assert!((c.dot(p.n_left) - sa).abs() < 1e-10);
            assert!((c.dot(p.n_right) - sa).abs() < 1e-10);
            assert!((c.dot(p.n_top) - sb).abs() < 1e-10);
            assert!((c.dot(p.n_bottom) - sb).abs() < 1e-10);
        }
    }

    #[test]
    fn area_closed_forms() {
        let r = SphericalRect::new(1.0, 1.0, FRAC_PI_2, FRAC_PI_2).unwrap();
        assert!((r.area() - 2.0 * PI / 3.0).abs() < 1e-12);
        let r = SphericalRect::new(1.0, 1.0, PI, PI).unwrap();
        assert!((r.area() - TAU).abs() < 1e-12);
        // same value through the arccos form
        let s = (0.2f64).sin() * (0.45f64).sin();
        let via_acos = 4.0 * (-s).acos() - TAU;
        assert!((fov_area(0.4, 0.9) - via_acos).abs() < 1e-14);
    }

    #[test]
    fn area_monotone_in_fov() {
        let mut last = 0.0;
        for i in 1..=100 {
            let a = fov_area(i as f64 * PI / 100.0, 1.0);
            assert!(a > last);
            last = a;
        }
    }

    #[test]
    fn top_left_vertex_hand_value() {
        let r = SphericalRect::new(0.0, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap();
        let v = rect_vertices(&r).unwrap();
        let k = 1.0 / 3f64.sqrt();
        assert!((v[0].x() - k).abs() < 1e-15);
        assert!((v[0].y() - k).abs() < 1e-15);
        assert!((v[0].z() - k).abs() < 1e-15);
    }

    #[test]
    fn vertices_match_gnomonic_corners() {
        // corners sit at (1, ±tan(α/2), ±tan(β/2)) in look/right/up coordinates
        for i in 0..25 {
            let r = SphericalRect::new(
                0.25 * i as f64,
                0.12 * i as f64 + 0.01,
                0.05 + 0.12 * i as f64,
                0.3 + 0.1 * i as f64,
            )
            .unwrap();
            let f = r.frame();
            let ta = (r.alpha() / 2.0).tan();
            let tb = (r.beta() / 2.0).tan();
            let expect = [(ta, tb), (-ta, tb), (-ta, -tb), (ta, -tb)];
            let v = rect_vertices(&r).unwrap();
            for (vi, (u, w)) in v.iter().zip(expect) {
                let e = f.world(1.0, u, w).normalized().unwrap();
                assert!(vi.angle_to(e) < 1e-12, "rect {r}: {vi} vs {e}");
            }
        }
    }

    #[test]
    fn vertices_are_counter_clockwise_from_outside() {
        let r = SphericalRect::new(2.0, 1.2, 0.7, 0.4).unwrap();
        let v = rect_vertices(&r).unwrap();
        let c = r.center().as_vec();
        for i in 0..4 {
            let turn = v[i].cross(v[(i + 1) % 4]).dot(c);
            assert!(turn > 0.0);
        }
    }

    #[test]
    fn hemisphere_has_no_vertices() {
        let r = SphericalRect::new(0.0, 1.0, PI, PI).unwrap();
        assert!(matches!(
            rect_vertices(&r),
            Err(GeometryError::DegenerateRect)
        ));
        // a half-width box is a lune with antipodal corners
        let r = SphericalRect::new(0.0, 1.0, PI, 1.0).unwrap();
        let v = rect_vertices(&r).unwrap();
        assert!(v[0].angle_to(v[1].antipode()) < 1e-12);
    }

    #[test]
    fn containment_examples() {
        let r = SphericalRect::new(0.0, FRAC_PI_2, 0.5, 0.5).unwrap();
        assert!(contains_point(&r, r.center()));
        assert!(!contains_point(&r, sph_to_vec(PI, FRAC_PI_2)));
        for v in rect_vertices(&r).unwrap() {
            assert!(contains_point(&r, v));
        }
    }

    #[test]
    fn vertices_rotate_with_azimuth_shift() {
        let r = SphericalRect::new(0.3, 0.8, 0.9, 0.6).unwrap();
        let s = r.shifted(1.1);
        let (sn, cs) = 1.1f64.sin_cos();
        for (a, b) in rect_vertices(&r).unwrap().iter().zip(rect_vertices(&s).unwrap()) {
            let rot = UnitVec3::new(cs * a.x() - sn * a.y(), sn * a.x() + cs * a.y(), a.z()).unwrap();
            assert!(rot.angle_to(b) < 1e-12);
        }
    }
}
