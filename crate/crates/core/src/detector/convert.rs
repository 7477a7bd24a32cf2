//! Conversion of a planar ERP box, as predicted by a conventional detector,
//! into the spherical rectangle it tightly bounds.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use super::decode::MIN_FOV;
use super::DetectorError;
use crate::criteria::{ErpImageSpec, PixelRect};
use crate::geometry::{local_frame, sph_to_vec, wrap_azimuth, SphericalRect, UnitVec3, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConversionCase {
    /// Box inside one hemisphere: bottom corners on the row nearer the
    /// equator.
    Hemisphere,
    /// Box across the equator: both sides' midpoints are on the box rows.
    Straddling,
    /// Box at least half the image wide, which no pole-free spherical rect
    /// produces; mapped to `(θ_c, φ_c, min(Δθ, π), Δφ)`.
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conversion {
    pub bbox: SphericalRect,
    pub case: ConversionCase,
    pub alpha_clamped: bool,
    pub beta_clamped: bool,
    /// The box reaches row 0 or row H, so the pole may belong to the object.
    pub touches_pole: bool,
}

/// Spherical rectangle whose tight ERP box is `rect`.
///
/// The side farther from the equator is the wider one in the image. Its
/// midpoint O sits on the box's outer row and its great circle is tangent
/// to that row there, which fixes corners A and B at the box's left and
/// right columns. The other two corners C and D are placed so that
/// `∠CD = ∠AB`: on the inner row for a one-hemisphere box, or symmetric
/// about the inner side's midpoint for a box across the equator. The
/// center and fovs follow from the four corners.
pub fn planar_to_spherical(rect: &PixelRect, spec: ErpImageSpec) -> Result<Conversion, DetectorError> {
    let sx = TAU / spec.width as f64;
    let sy = PI / spec.height as f64;
    let dtheta = rect.width() * sx;
    if !(dtheta > 0.0 && rect.height() > 0.0) {
        return Err(DetectorError::DegenerateRect);
    }
    let theta_c = wrap_azimuth(0.5 * (rect.x_min + rect.x_max) * sx);
    let mut phi_t = (rect.y_min * sy).clamp(0.0, PI);
    let mut phi_b = (rect.y_max * sy).clamp(0.0, PI);
    let touches_pole = phi_t <= 0.0 || phi_b >= PI;

    if dtheta >= PI {
        log::warn!("ERP box spans {dtheta:.4} rad of azimuth; fov clamped to π");
        return finish(
            theta_c,
            0.5 * (phi_t + phi_b),
            dtheta,
            phi_b - phi_t,
            ConversionCase::Fallback,
            touches_pole,
        );
    }

    // mirror a southern box so the outer side is the top
    let mirror = phi_t + phi_b > PI;
    if mirror {
        (phi_t, phi_b) = (PI - phi_b, PI - phi_t);
    }
    let half = dtheta / 2.0;
    let phi_ab = phi_t.sin().atan2(phi_t.cos() * half.cos());
    let a = sph_to_vec(theta_c - half, phi_ab);
    let b = sph_to_vec(theta_c + half, phi_ab);
    let ab = a.angle_to(b);

    let (c, d, case) = if phi_b <= FRAC_PI_2 {
        let s2 = phi_b.sin().powi(2);
        let cos2 = ((ab.cos() - phi_b.cos().powi(2)) / s2).clamp(-1.0, 1.0);
        let h = 0.5 * cos2.acos();
        (
            sph_to_vec(theta_c + h, phi_b),
            sph_to_vec(theta_c - h, phi_b),
            ConversionCase::Hemisphere,
        )
    } else {
        let o2 = sph_to_vec(theta_c, phi_b).as_vec();
        let east = Vec3::new(-theta_c.sin(), theta_c.cos(), 0.0);
        let (s, co) = (0.5 * ab).sin_cos();
        let on_circle = |sign: f64| (o2 * co + east * (sign * s)).normalized().unwrap_or(UnitVec3::Z);
        (on_circle(1.0), on_circle(-1.0), ConversionCase::Straddling)
    };

    let corners = [a, b, c, d];
    let sum = corners.iter().fold(Vec3::default(), |acc, v| acc + v.as_vec());
    let center = sum.normalized().ok_or(DetectorError::DegenerateRect)?;
    let phi = center.x().hypot(center.y()).atan2(center.z());
    let frame = local_frame(theta_c, phi);
    let (mut su, mut sv) = (0.0, 0.0);
    for v in corners {
        let l = frame.local_coords(v.as_vec());
        su += (l.y / l.x).abs();
        sv += (l.z / l.x).abs();
    }
    let alpha = 2.0 * (su / 4.0).atan();
    let beta = 2.0 * (sv / 4.0).atan();
    let phi = if mirror { PI - phi } else { phi };
    finish(theta_c, phi, alpha, beta, case, touches_pole)
}

fn finish(
    theta: f64,
    phi: f64,
    alpha: f64,
    beta: f64,
    case: ConversionCase,
    touches_pole: bool,
) -> Result<Conversion, DetectorError> {
    let fix = |f: f64| {
        let c = if f.is_finite() { f.clamp(MIN_FOV, PI) } else { MIN_FOV };
        (c, c != f)
    };
    let (alpha, alpha_clamped) = fix(alpha);
    let (beta, beta_clamped) = fix(beta);
    if touches_pole {
        log::warn!("ERP box touches a pole row; converted fov may be capped");
    }
    let bbox = SphericalRect::wrapped(theta, phi.clamp(0.0, PI), alpha, beta)
        .map_err(|_| DetectorError::DegenerateRect)?;
    Ok(Conversion {
        bbox,
        case,
        alpha_clamped,
        beta_clamped,
        touches_pole,
    })
}
