//! Equirectangular plots of spherical-rectangle boundaries.
//!
//! Each side is a great-circle arc, sampled densely and mapped to ERP
//! pixels, so the distortion of boxes near the poles is drawn as is. Lines
//! that cross the θ = 0 seam are cut there and continued on the other edge.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use image::{Rgb, RgbImage};

use crate::criteria::ErpImageSpec;
use crate::detector::GtAnnotation;
use crate::geometry::{vec_to_sph, SphericalRect, UnitVec3};

pub const DEFAULT_SAMPLES_PER_SIDE: usize = 64;

const PALETTE: [[u8; 3]; 8] = [
    [230, 25, 75],
    [60, 180, 75],
    [0, 130, 200],
    [245, 130, 48],
    [145, 30, 180],
    [70, 240, 240],
    [240, 50, 230],
    [170, 110, 40],
];

fn slerp(a: UnitVec3, b: UnitVec3, s: f64) -> UnitVec3 {
    let w = a.angle_to(b);
    if w < 1e-12 {
        return a;
    }
    let (ka, kb) = (((1.0 - s) * w).sin() / w.sin(), (s * w).sin() / w.sin());
    (a.as_vec() * ka + b.as_vec() * kb).normalized().unwrap_or(a)
}

/// Closed boundary loop, `samples_per_side` points per side, starting at
/// the top-left corner. The last point repeats the first.
pub fn boundary_points(rect: &SphericalRect, samples_per_side: usize) -> Vec<UnitVec3> {
    let n = samples_per_side.max(2);
    let f = rect.frame();
    let unit = |l: f64, r: f64, u: f64| f.world(l, r, u).normalized().unwrap_or(f.v_look);
    if rect.is_hemisphere() {
        return (0..=4 * n)
            .map(|i| {
                let t = TAU * i as f64 / (4 * n) as f64;
                unit(0.0, t.cos(), t.sin())
            })
            .collect();
    }
    let (sa, ca) = (rect.alpha() / 2.0).sin_cos();
    let (sb, cb) = (rect.beta() / 2.0).sin_cos();
    // corners scaled so that a π fov stays finite
    let corner = |r: f64, u: f64| unit(ca * cb, r * sa * cb, u * ca * sb);
    let tl = corner(-1.0, 1.0);
    let tr = corner(1.0, 1.0);
    let br = corner(1.0, -1.0);
    let bl = corner(-1.0, -1.0);
    let top = unit(cb, 0.0, sb);
    let right = unit(ca, sa, 0.0);
    let bottom = unit(cb, 0.0, -sb);
    let left = unit(ca, -sa, 0.0);
    let mut pts = Vec::with_capacity(4 * n + 1);
    for (a, m, b) in [(tl, top, tr), (tr, right, br), (br, bottom, bl), (bl, left, tl)] {
        for i in 0..n {
            let s = 2.0 * i as f64 / n as f64;
            pts.push(if s < 1.0 { slerp(a, m, s) } else { slerp(m, b, s - 1.0) });
        }
    }
    pts.push(tl);
    pts
}

/// Boundary as ERP pixel polylines, cut at the seam.
pub fn boundary_polylines(rect: &SphericalRect, spec: ErpImageSpec, samples_per_side: usize) -> Vec<Vec<(f64, f64)>> {
    let w = spec.width as f64;
    let h = spec.height as f64;
    let to_px = |v: UnitVec3| {
        let (t, p) = vec_to_sph(v);
        (t / TAU * w, p / PI * h)
    };
    let pts: Vec<(f64, f64)> = boundary_points(rect, samples_per_side).into_iter().map(to_px).collect();
    let mut lines = vec![vec![pts[0]]];
    for pair in pts.windows(2) {
        let (p, q) = (pair[0], pair[1]);
        let dx = q.0 - p.0;
        if dx.abs() > w / 2.0 {
            // crossing the seam: unwrap q next to p, cut at the image edge
            let (q_un, edge_out, edge_in) = if dx > 0.0 { (q.0 - w, 0.0, w) } else { (q.0 + w, w, 0.0) };
            let t = (edge_out - p.0) / (q_un - p.0);
            let y = p.1 + t * (q.1 - p.1);
            lines.last_mut().expect("non-empty").push((edge_out, y));
            lines.push(vec![(edge_in, y)]);
        }
        lines.last_mut().expect("non-empty").push(q);
    }
    lines.retain(|l| l.len() >= 2);
    lines
}

fn color(class_id: usize) -> [u8; 3] {
    PALETTE[class_id % PALETTE.len()]
}

/// SVG of the boxes' boundaries, colored by class, on a `spec`-sized canvas.
pub fn render_svg(boxes: &[GtAnnotation], spec: ErpImageSpec) -> String {
    let (w, h) = (spec.width, spec.height);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white" stroke="black"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="0" y1="{0}" x2="{w}" y2="{0}" stroke="gray" stroke-dasharray="4 4"/>"#,
        h as f64 / 2.0
    );
    for b in boxes {
        let [r, g, bl] = color(b.class_id);
        for line in boundary_polylines(&b.bbox, spec, DEFAULT_SAMPLES_PER_SIDE) {
            let pts: Vec<String> = line.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="rgb({r},{g},{bl})" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Raster version of [`render_svg`].
pub fn render_png(boxes: &[GtAnnotation], spec: ErpImageSpec) -> RgbImage {
    let (w, h) = (spec.width as u32, spec.height as u32);
    let mut img = RgbImage::from_pixel(w, h, Rgb([255, 255, 255]));
    for x in (0..w).step_by(8) {
        img.put_pixel(x, h / 2, Rgb([160, 160, 160]));
    }
    for b in boxes {
        let c = Rgb(color(b.class_id));
        for line in boundary_polylines(&b.bbox, spec, DEFAULT_SAMPLES_PER_SIDE) {
            for seg in line.windows(2) {
                let (p, q) = (seg[0], seg[1]);
                let steps = ((q.0 - p.0).abs().max((q.1 - p.1).abs()) * 2.0).ceil().max(1.0) as usize;
                for k in 0..=steps {
                    let t = k as f64 / steps as f64;
                    let x = (p.0 + t * (q.0 - p.0)).floor().clamp(0.0, (w - 1) as f64) as u32;
                    let y = (p.1 + t * (q.1 - p.1)).floor().clamp(0.0, (h - 1) as f64) as u32;
                    img.put_pixel(x, y, c);
                }
            }
        }
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> ErpImageSpec {
        ErpImageSpec::new(512, 256).unwrap()
    }

    fn x_span(lines: &[Vec<(f64, f64)>]) -> f64 {
        let xs = lines.iter().flatten().map(|p| p.0);
        let (lo, hi) = xs.fold((f64::MAX, f64::MIN), |(a, b), x| (a.min(x), b.max(x)));
        hi - lo
    }

    #[test]
    fn every_boundary_point_is_on_a_side_plane() {
        let r = SphericalRect::new(2.0, 0.9, 0.8, 1.1).unwrap();
        let planes = r.boundary().as_array();
        for p in boundary_points(&r, 32) {
            let d = planes.iter().map(|n| n.dot(p).abs()).fold(f64::MAX, f64::min);
            assert!(d < 1e-12, "{d}");
        }
    }

    #[test]
    fn equator_box_is_nearly_rectangular() {
        let r = SphericalRect::new(PI, PI / 2.0, 0.4, 0.4).unwrap();
        let lines = boundary_polylines(&r, spec(), 64);
        assert_eq!(lines.len(), 1);
        // planar width of the box at 512 px per 2π
        let want = 0.4 / TAU * 512.0;
        assert!((x_span(&lines) - want).abs() < 0.5, "{}", x_span(&lines));
    }

    #[test]
    fn polar_box_spans_wide_azimuth() {
        let r = SphericalRect::new(PI, 0.25, 0.4, 0.4).unwrap();
        let lines = boundary_polylines(&r, spec(), 64);
        assert!(x_span(&lines) > 0.4 * 512.0, "{}", x_span(&lines));
    }

    #[test]
    fn seam_crossing_is_cut_at_both_edges() {
        let r = SphericalRect::new(0.0, PI / 2.0, 0.5, 0.5).unwrap();
        let lines = boundary_polylines(&r, spec(), 64);
        assert!(lines.len() >= 2);
        let xs: Vec<f64> = lines.iter().flatten().map(|p| p.0).collect();
        assert!(xs.contains(&0.0) && xs.contains(&512.0));
        for l in &lines {
            for s in l.windows(2) {
                assert!((s[1].0 - s[0].0).abs() < 256.0);
            }
        }
    }

    #[test]
    fn outputs_draw_something() {
        let boxes = [
            GtAnnotation { class_id: 0, bbox: SphericalRect::new(1.0, 1.0, 0.5, 0.5).unwrap() },
            GtAnnotation { class_id: 1, bbox: SphericalRect::new(4.0, 2.0, PI, 0.5).unwrap() },
            GtAnnotation { class_id: 2, bbox: SphericalRect::new(4.0, 2.0, PI, PI).unwrap() },
        ];
        let svg = render_svg(&boxes, spec());
        assert!(svg.matches("<polyline").count() >= 3);
        let img = render_png(&boxes, spec());
        let colored = img.pixels().filter(|p| p.0 == color(1)).count();
        assert!(colored > 100);
    }
}
