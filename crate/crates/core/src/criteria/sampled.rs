//! Polygon criterion: the tangent-plane rectangle is sampled, projected to
//! ERP coordinates and compared as planar polygons.

use std::f64::consts::{PI, TAU};

use super::erp::wrap_signed;
use super::planar::{make_ccw, polygon_intersection_area, signed_area, Point};
use super::CriterionError;
use crate::geometry::{vec_to_sph, SphericalRect, UnitVec3};

/// Fovs this close to π put tangent-plane samples at infinity.
const OVERFLOW_MARGIN: f64 = 1e-9;

/// Boundary of the rect's gnomonic rectangle sampled with `n_points / 4`
/// points per side, in unwrapped `(θ, φ)` coordinates (radians, so one unit
/// is the same pixel count on both axes of a 2:1 ERP grid).
///
/// A box around a pole winds once in θ; its outline is then closed along
/// the pole row, which is how the box looks in the ERP image.
pub fn sampled_outline(rect: &SphericalRect, n_points: usize) -> Result<Vec<Point>, CriterionError> {
    if n_points < 4 || n_points % 4 != 0 {
        return Err(CriterionError::InvalidSampleCount(n_points));
    }
    if rect.alpha() >= PI - OVERFLOW_MARGIN || rect.beta() >= PI - OVERFLOW_MARGIN {
        return Err(CriterionError::ProjectionOverflow);
    }
    let f = rect.frame();
    let tu = (rect.alpha() / 2.0).tan();
    let tv = (rect.beta() / 2.0).tan();
    let m = n_points / 4;
    // corners in (right, up) order; walking them in this order runs
    // counter-clockwise in the tangent plane
    let corners = [(tu, tv), (-tu, tv), (-tu, -tv), (tu, -tv)];
    let mut out: Vec<Point> = Vec::with_capacity(n_points + 3);
    let mut prev_theta = rect.theta();
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        for i in 0..m {
            let s = i as f64 / m as f64;
            let (u, v) = (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1));
            let p = f
                .world(1.0, u, v)
                .normalized()
                .unwrap_or(UnitVec3::Z);
            let (theta, phi) = vec_to_sph(p);
            let t = prev_theta + wrap_signed(theta - prev_theta);
            out.push((t, phi));
            prev_theta = t;
        }
    }
    let (t0, p0) = out[0];
    let closing = prev_theta + wrap_signed(t0 - prev_theta);
    let winding = closing - t0;
    if winding.abs() > PI {
        let pole_phi = if rect.contains(UnitVec3::Z) { 0.0 } else { PI };
        out.push((closing, p0));
        out.push((closing, pole_phi));
        out.push((t0, pole_phi));
    }
    Ok(make_ccw(out))
}

/// Planar IoU of the two sampled outlines on the periodic ERP strip.
pub fn iou_polygon_sampled(
    b1: &SphericalRect,
    b2: &SphericalRect,
    n_points: usize,
) -> Result<f64, CriterionError> {
    let p1 = sampled_outline(b1, n_points)?;
    let p2 = sampled_outline(b2, n_points)?;
    let a1 = signed_area(&p1);
    let a2 = signed_area(&p2);
    // both outlines start near their own center azimuth; try the copies of
    // p2 that can reach p1 across the seam
    let mut inter = 0.0;
    let shift0 = ((b1.theta() - b2.theta()) / TAU).round() * TAU;
    for k in -1..=1 {
        let s = shift0 + k as f64 * TAU;
        let moved: Vec<Point> = p2.iter().map(|&(t, p)| (t + s, p)).collect();
        inter += polygon_intersection_area(&p1, &moved);
    }
    let inter = inter.min(a1).min(a2);
    let union = a1 + a2 - inter;
    if union <= 0.0 {
        return Ok(0.0);
    }
    Ok((inter / union).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::iou;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn rejects_bad_counts_and_overflow() {
        let r = SphericalRect::new(1.0, 1.0, 0.5, 0.5).unwrap();
        assert!(matches!(sampled_outline(&r, 6), Err(CriterionError::InvalidSampleCount(6))));
        assert!(matches!(sampled_outline(&r, 0), Err(CriterionError::InvalidSampleCount(0))));
        let wide = SphericalRect::new(1.0, 1.0, PI, 0.5).unwrap();
        assert!(matches!(sampled_outline(&wide, 16), Err(CriterionError::ProjectionOverflow)));
    }

    #[test]
    fn identical_is_one() {
        for r in [
            SphericalRect::new(1.0, 1.0, 0.5, 0.7).unwrap(),
            SphericalRect::new(0.02, 2.9, 1.5, 0.9).unwrap(),
            SphericalRect::new(3.0, 0.1, 0.6, 0.6).unwrap(),
        ] {
            let v = iou_polygon_sampled(&r, &r, 64).unwrap();
            assert!((v - 1.0).abs() < 1e-6, "{r}: {v}");
        }
    }

    #[test]
    fn equator_outline_has_the_box_extent() {
        let r = SphericalRect::new(2.0, FRAC_PI_2, 0.6, 0.4).unwrap();
        let o = sampled_outline(&r, 16).unwrap();
        let tmin = o.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let tmax = o.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        assert!((tmax - tmin - 0.6).abs() < 1e-12);
    }

    #[test]
    fn pole_outline_spans_the_strip() {
        let r = SphericalRect::new(1.0, 0.15, 0.6, 0.6).unwrap();
        let o = sampled_outline(&r, 64).unwrap();
        assert!(o.iter().any(|p| p.1 == 0.0));
        let tmin = o.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let tmax = o.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        assert!((tmax - tmin - TAU).abs() < 1e-9);
    }

    #[test]
    fn seam_pair_matches_shifted_pair() {
        let a = SphericalRect::new(0.1, 1.3, 0.5, 0.4).unwrap();
        let b = SphericalRect::new(TAU - 0.1, 1.4, 0.5, 0.4).unwrap();
        let v = iou_polygon_sampled(&a, &b, 64).unwrap();
        let w = iou_polygon_sampled(&a.shifted(1.0), &b.shifted(1.0), 64).unwrap();
        assert!(v > 0.1);
        assert!((v - w).abs() < 1e-9);
    }

    #[test]
    fn self_convergence_on_the_equator() {
        let a = SphericalRect::new(1.0, FRAC_PI_2, 0.9, 0.7).unwrap();
        let b = SphericalRect::new(1.3, 1.7, 0.8, 0.9).unwrap();
        let vals: Vec<f64> = [16, 32, 64, 128, 256, 512]
            .iter()
            .map(|&n| iou_polygon_sampled(&a, &b, n).unwrap())
            .collect();
        let limit = vals[vals.len() - 1];
        let errs: Vec<f64> = vals[..5].iter().map(|v| (v - limit).abs()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }

    #[test]
    fn polar_pair_is_biased() {
        let a = SphericalRect::new(0.5, 0.25, 0.9, 0.9).unwrap();
        let b = SphericalRect::new(1.1, 0.35, 0.9, 0.9).unwrap();
        let v = iou_polygon_sampled(&a, &b, 128).unwrap();
        assert!((v - iou(&a, &b)).abs() > 0.03, "{v} vs {}", iou(&a, &b));
    }
}
