//! Criteria that replace the spherical rectangle by an ERP-aligned shape:
//! the planar bbox, the bbox's circumscribed circle, and the θ×φ zone.

use std::f64::consts::{PI, TAU};

use super::erp::{angular_extent, erp_bbox, ErpImageSpec};
use super::planar::{circle_intersection_area, periodic_overlap};
use crate::geometry::SphericalRect;

fn ratio(inter: f64, a1: f64, a2: f64) -> f64 {
    let union = a1 + a2 - inter;
    if union <= 0.0 {
        0.0
    } else {
        (inter / union).clamp(0.0, 1.0)
    }
}

/// Planar IoU of the tight ERP pixel boxes, with the seam handled by trying
/// both placements of the second box.
pub fn iou_planar_rect(b1: &SphericalRect, b2: &SphericalRect, spec: ErpImageSpec) -> f64 {
    if b1 == b2 {
        return 1.0;
    }
    let r1 = erp_bbox(b1, spec);
    let r2 = erp_bbox(b2, spec);
    let w = periodic_overlap(r1.x_min, r1.x_max, r2.x_min, r2.x_max, spec.width as f64);
    let h = (r1.y_max.min(r2.y_max) - r1.y_min.max(r2.y_min)).max(0.0);
    ratio(w * h, r1.area(), r2.area())
}

/// Center and radius, in continuous pixels, of the circle standing in for
/// `b`: centered on the box center, radius half the diagonal of the ERP
/// bbox before it is rounded to whole pixels.
pub fn circle_of(b: &SphericalRect, spec: ErpImageSpec) -> ((f64, f64), f64) {
    let e = angular_extent(b);
    let sx = spec.width as f64 / TAU;
    let sy = spec.height as f64 / PI;
    let cx = b.theta() * sx;
    let cy = b.phi() * sy;
    ((cx, cy), 0.5 * (e.theta_span() * sx).hypot(e.phi_span() * sy))
}

/// Planar IoU of the two circles; the horizontal center distance is taken
/// the short way around the seam.
pub fn iou_circle(b1: &SphericalRect, b2: &SphericalRect, spec: ErpImageSpec) -> f64 {
    if b1 == b2 {
        return 1.0;
    }
    let ((x1, y1), r1) = circle_of(b1, spec);
    let ((x2, y2), r2) = circle_of(b2, spec);
    let w = spec.width as f64;
    let dx = (x1 - x2).abs() % w;
    let d = dx.min(w - dx).hypot(y1 - y2);
    let inter = circle_intersection_area(r1, r2, d);
    ratio(inter, PI * r1 * r1, PI * r2 * r2)
}

/// Polar interval `[φ − β/2, φ + β/2]` clipped to `[0, π]`.
fn zone_phi(b: &SphericalRect) -> (f64, f64) {
    (
        (b.phi() - b.beta() / 2.0).max(0.0),
        (b.phi() + b.beta() / 2.0).min(PI),
    )
}

fn zone_area(dtheta: f64, phi_top: f64, phi_bottom: f64) -> f64 {
    if phi_bottom <= phi_top {
        return 0.0;
    }
    // cos a − cos b as a product, accurate for thin zones
    dtheta * 2.0 * ((phi_top + phi_bottom) / 2.0).sin() * ((phi_bottom - phi_top) / 2.0).sin()
}

/// IoU of the regions `[θ ± α/2] × [φ ± β/2]` measured on the sphere. The
/// overlap is taken to be the product of the interval overlaps, as the zone
/// model assumes.
pub fn iou_sph_zone(b1: &SphericalRect, b2: &SphericalRect) -> f64 {
    if b1 == b2 {
        return 1.0;
    }
    let (t1, t2) = (zone_phi(b1), zone_phi(b2));
    let a1 = zone_area(b1.alpha(), t1.0, t1.1);
    let a2 = zone_area(b2.alpha(), t2.0, t2.1);
    let dtheta = periodic_overlap(
        b1.theta() - b1.alpha() / 2.0,
        b1.theta() + b1.alpha() / 2.0,
        b2.theta() - b2.alpha() / 2.0,
        b2.theta() + b2.alpha() / 2.0,
        TAU,
    );
    let inter = zone_area(dtheta, t1.0.max(t2.0), t1.1.min(t2.1));
    ratio(inter, a1, a2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::iou;
    use std::f64::consts::FRAC_PI_2;

    fn spec() -> ErpImageSpec {
        ErpImageSpec::new(8192, 4096).unwrap()
    }

    #[test]
    fn identical_is_one() {
        let r = SphericalRect::new(6.2, 0.2, 1.1, 0.4).unwrap();
        assert_eq!(iou_planar_rect(&r, &r, spec()), 1.0);
        assert_eq!(iou_circle(&r, &r, spec()), 1.0);
        assert_eq!(iou_sph_zone(&r, &r), 1.0);
    }

    #[test]
    fn planar_equator_pair_is_a_rectangle_iou() {
        let a = SphericalRect::new(1.0, FRAC_PI_2, 0.6, 0.4).unwrap();
        let b = SphericalRect::new(1.2, FRAC_PI_2, 0.6, 0.4).unwrap();
        // widths 0.6 overlapping by 0.4, equal heights
        let expected = 0.4 / 0.8;
        assert!((iou_planar_rect(&a, &b, spec()) - expected).abs() < 2e-3);
    }

    #[test]
    fn planar_is_biased_near_the_pole() {
        let a = SphericalRect::new(1.0, 0.3, 0.8, 0.8).unwrap();
        let b = SphericalRect::new(1.0, FRAC_PI_2, 0.8, 0.8).unwrap();
        let c = SphericalRect::new(1.5, 0.3, 0.8, 0.8).unwrap();
        let d = SphericalRect::new(1.5, FRAC_PI_2, 0.8, 0.8).unwrap();
        let polar = iou_planar_rect(&a, &c, spec());
        let equator = iou_planar_rect(&b, &d, spec());
        assert!((polar - iou(&a, &c)).abs() > 0.05);
        assert!((equator - iou(&b, &d)).abs() < (polar - iou(&a, &c)).abs());
    }

    #[test]
    fn circle_ignores_aspect_ratio() {
        let a = SphericalRect::new(2.0, FRAC_PI_2, 0.8, 0.4).unwrap();
        let b = SphericalRect::new(2.0, FRAC_PI_2, 0.4, 0.8).unwrap();
        assert!((iou_circle(&a, &b, spec()) - 1.0).abs() < 1e-12);
    }

    /// Pixel-count oracle for the circle pair on a 4k grid.
    #[test]
    fn circle_against_raster() {
        let s = ErpImageSpec::new(4096, 2048).unwrap();
        let a = SphericalRect::new(1.0, 1.4, 0.5, 0.3).unwrap();
        let b = SphericalRect::new(1.2, 1.5, 0.4, 0.5).unwrap();
        let ((x1, y1), r1) = circle_of(&a, s);
        let ((x2, y2), r2) = circle_of(&b, s);
        let (mut both, mut either) = (0u64, 0u64);
        for y in 0..s.height {
            for x in 0..s.width {
                let (px, py) = (x as f64 + 0.5, y as f64 + 0.5);
                let i1 = (px - x1).hypot(py - y1) <= r1;
                let i2 = (px - x2).hypot(py - y2) <= r2;
                both += (i1 && i2) as u64;
                either += (i1 || i2) as u64;
            }
        }
        let raster = both as f64 / either as f64;
        assert!((raster - iou_circle(&a, &b, s)).abs() < 1e-3);
    }

    #[test]
    fn zone_approaches_exact_for_small_boxes_on_the_equator() {
        let diff = |scale: f64, beta: f64| {
            let a = SphericalRect::new(1.0, FRAC_PI_2, 0.6 * scale, beta).unwrap();
            let b = SphericalRect::new(1.0 + 0.3 * scale, FRAC_PI_2, 0.6 * scale, beta).unwrap();
            (iou_sph_zone(&a, &b) - iou(&a, &b)).abs()
        };
        let joint: Vec<f64> = [1.0, 0.5, 0.25, 0.1].iter().map(|&s| diff(s, 0.6 * s)).collect();
        assert!(joint.windows(2).all(|w| w[1] < w[0]), "{joint:?}");
        assert!(joint[3] < 1e-4);
        // thinning alone leaves the sag of the long sides, which depends on α
        let thin: Vec<f64> = [0.4, 0.1, 0.02].iter().map(|&b| diff(1.0, b)).collect();
        assert!(thin.iter().all(|d| (0.004..0.006).contains(d)), "{thin:?}");
    }

    #[test]
    fn zone_wraps_the_seam() {
        let a = SphericalRect::new(0.1, 1.0, 0.6, 0.5).unwrap();
        let b = SphericalRect::new(TAU - 0.1, 1.0, 0.6, 0.5).unwrap();
        assert!((iou_sph_zone(&a, &b) - 0.4 / 0.8).abs() < 1e-12);
    }
}
