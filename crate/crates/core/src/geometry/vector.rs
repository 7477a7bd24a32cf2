use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A free 3D vector. Cross products of plane normals live here before they
/// are normalized back onto the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn cross(self, other: Self) -> Self {
        Self {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Projects onto the unit sphere; `None` for the zero vector (or anything
    /// too short to carry a direction).
    pub fn normalized(self) -> Option<UnitVec3> {
        let n = self.norm();
        if n > f64::MIN_POSITIVE && n.is_finite() {
            Some(UnitVec3(self * (1.0 / n)))
        } else {
            None
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// A direction on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 3]", try_from = "[f64; 3]")]
pub struct UnitVec3(Vec3);

impl UnitVec3 {
    pub const X: UnitVec3 = UnitVec3(Vec3::new(1.0, 0.0, 0.0));
    pub const Y: UnitVec3 = UnitVec3(Vec3::new(0.0, 1.0, 0.0));
    pub const Z: UnitVec3 = UnitVec3(Vec3::new(0.0, 0.0, 1.0));

    /// Normalizes `(x, y, z)`.
    pub fn new(x: f64, y: f64, z: f64) -> Option<Self> {
        Vec3::new(x, y, z).normalized()
    }

    /// Wraps components the caller already knows to be unit length.
    pub(crate) const fn new_unchecked(x: f64, y: f64, z: f64) -> Self {
        UnitVec3(Vec3::new(x, y, z))
    }

    #[inline]
    pub fn x(self) -> f64 {
        self.0.x
    }
    #[inline]
    pub fn y(self) -> f64 {
        self.0.y
    }
    #[inline]
    pub fn z(self) -> f64 {
        self.0.z
    }

    #[inline]
    pub fn as_vec(self) -> Vec3 {
        self.0
    }

    #[inline]
    pub fn dot(self, other: UnitVec3) -> f64 {
        self.0.dot(other.0)
    }

    #[inline]
    pub fn cross(self, other: UnitVec3) -> Vec3 {
        self.0.cross(other.0)
    }

    /// Great-circle angle to `other` in `[0, π]`.
    ///
    /// Uses `atan2(|a×b|, a·b)`, which stays accurate for nearly parallel and
    /// nearly antipodal pairs where `acos(a·b)` loses half its digits.
    #[inline]
    pub fn angle_to(self, other: UnitVec3) -> f64 {
        self.cross(other).norm().atan2(self.dot(other))
    }

    pub fn antipode(self) -> UnitVec3 {
        UnitVec3(-self.0)
    }
}

impl From<UnitVec3> for [f64; 3] {
    fn from(v: UnitVec3) -> Self {
        [v.x(), v.y(), v.z()]
    }
}

impl TryFrom<[f64; 3]> for UnitVec3 {
    type Error = &'static str;
    fn try_from(v: [f64; 3]) -> Result<Self, Self::Error> {
        UnitVec3::new(v[0], v[1], v[2]).ok_or("zero-length vector")
    }
}

impl fmt::Display for UnitVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}, {:.6})", self.x(), self.y(), self.z())
    }
}

/// Wraps an azimuth into `[0, 2π)`.
pub fn wrap_azimuth(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Maps azimuth/polar angles to a unit vector: `(sin φ cos θ, sin φ sin θ, cos φ)`.
///
/// The formula is periodic, so out-of-range angles need no special handling.
#[inline]
pub fn sph_to_vec(theta: f64, phi: f64) -> UnitVec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    UnitVec3::new_unchecked(sp * ct, sp * st, cp)
}

/// Inverse of [`sph_to_vec`]: `θ ∈ [0, 2π)`, `φ ∈ [0, π]`. At the poles θ is 0.
pub fn vec_to_sph(v: UnitVec3) -> (f64, f64) {
    let rho = v.x().hypot(v.y());
    let phi = rho.atan2(v.z());
    let theta = if rho == 0.0 {
        0.0
    } else {
        wrap_azimuth(v.y().atan2(v.x()))
    };
    (theta, phi.clamp(0.0, PI))
}

/// Local viewing frame at a sphere point.
///
/// `v_look` is the point itself, `v_right` points towards increasing azimuth
/// and `v_up` towards decreasing polar angle. The triple is orthonormal with
/// `v_look × v_right = v_up`. At the poles the formulas still yield an
/// orthonormal frame whose orientation follows θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub v_look: UnitVec3,
    pub v_right: UnitVec3,
    pub v_up: UnitVec3,
}

impl Frame {
    /// Expresses `v` in `(look, right, up)` coordinates.
    pub fn local_coords(&self, v: Vec3) -> Vec3 {
        Vec3::new(
            v.dot(self.v_look.as_vec()),
            v.dot(self.v_right.as_vec()),
            v.dot(self.v_up.as_vec()),
        )
    }

    /// Maps `(look, right, up)` coordinates back to world space.
    pub fn world(&self, look: f64, right: f64, up: f64) -> Vec3 {
        self.v_look.as_vec() * look + self.v_right.as_vec() * right + self.v_up.as_vec() * up
    }
}

pub fn local_frame(theta: f64, phi: f64) -> Frame {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Frame {
        v_look: UnitVec3::new_unchecked(sp * ct, sp * st, cp),
        v_right: UnitVec3::new_unchecked(-st, ct, 0.0),
        v_up: UnitVec3::new_unchecked(-cp * ct, -cp * st, sp),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: UnitVec3, b: [f64; 3], tol: f64) -> bool {
        (a.x() - b[0]).abs() < tol && (a.y() - b[1]).abs() < tol && (a.z() - b[2]).abs() < tol
    }

    #[test]
    fn sph_to_vec_examples() {
        assert!(close(sph_to_vec(0.0, FRAC_PI_2), [1.0, 0.0, 0.0], 1e-15));
        assert!(close(sph_to_vec(1.234, 0.0), [0.0, 0.0, 1.0], 1e-15));
        assert!(close(sph_to_vec(FRAC_PI_2, FRAC_PI_2), [0.0, 1.0, 0.0], 1e-15));
    }

    #[test]
    fn round_trip_away_from_poles() {
        for i in 0..50 {
            let theta = i as f64 * 0.125;
            let phi = 0.05 + (i as f64 * 0.061) % 3.0;
            let (t, p) = vec_to_sph(sph_to_vec(theta, phi));
            assert!((t - wrap_azimuth(theta)).abs() < 1e-12, "{theta} -> {t}");
            assert!((p - phi).abs() < 1e-12);
        }
    }

    #[test]
    fn frame_examples() {
        let f = local_frame(0.0, FRAC_PI_2);
        assert!(close(f.v_look, [1.0, 0.0, 0.0], 1e-15));
        assert!(close(f.v_right, [0.0, 1.0, 0.0], 1e-15));
        assert!(close(f.v_up, [0.0, 0.0, 1.0], 1e-15));

        let f = local_frame(FRAC_PI_2, FRAC_PI_2);
        assert!(close(f.v_look, [0.0, 1.0, 0.0], 1e-15));
        assert!(close(f.v_right, [-1.0, 0.0, 0.0], 1e-15));
        assert!(close(f.v_up, [0.0, 0.0, 1.0], 1e-15));

        let f = local_frame(0.0, 0.0);
        assert!(close(f.v_look, [0.0, 0.0, 1.0], 1e-15));
        assert!(close(f.v_right, [0.0, 1.0, 0.0], 1e-15));
        assert!(close(f.v_up, [-1.0, 0.0, 0.0], 1e-15));
    }

    #[test]
    fn frame_is_right_handed_and_orthonormal() {
        for i in 0..40 {
            let f = local_frame(i as f64 * 0.37, i as f64 * 0.0785);
            assert!(f.v_look.dot(f.v_right).abs() < 1e-12);
            assert!(f.v_look.dot(f.v_up).abs() < 1e-12);
            assert!(f.v_right.dot(f.v_up).abs() < 1e-12);
            let c = f.v_look.cross(f.v_right);
            assert!((c - f.v_up.as_vec()).norm() < 1e-12);
        }
    }

    #[test]
    fn angle_to_is_accurate_for_tiny_separations() {
        let a = sph_to_vec(0.3, 1.1);
        let b = sph_to_vec(0.3 + 1e-10, 1.1);
        let expected = 1e-10 * 1.1f64.sin();
        assert!((a.angle_to(b) - expected).abs() < 1e-16);
    }

    #[test]
    fn wrap_azimuth_range() {
        assert_eq!(wrap_azimuth(-1e-18), 0.0);
        assert!((wrap_azimuth(-0.5) - (TAU - 0.5)).abs() < 1e-15);
        assert!((wrap_azimuth(TAU + 0.25) - 0.25).abs() < 1e-15);
    }
}
