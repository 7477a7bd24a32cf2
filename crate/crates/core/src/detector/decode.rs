//! Peak extraction from predicted tensors.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::tensor::HeatmapTensor;
use crate::geometry::SphericalRect;

pub const DEFAULT_TOP_K: usize = 100;
pub const MIN_FOV: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub class_id: usize,
    pub score: f64,
    pub bbox: SphericalRect,
}

/// Cells strictly above all 8 neighbors; columns wrap, rows do not.
fn is_peak(plane: &[f64], w: usize, h: usize, x: usize, y: usize) -> bool {
    let v = plane[y * w + x];
    for dy in -1i64..=1 {
        let ny = y as i64 + dy;
        if ny < 0 || ny >= h as i64 {
            continue;
        }
        for dx in -1i64..=1 {
            if dx == 0 && dy == 0 {
                continue;
            }
            let nx = (x as i64 + dx).rem_euclid(w as i64) as usize;
            if nx == x && dy == 0 {
                continue;
            }
            if plane[ny as usize * w + nx] >= v {
                return false;
            }
        }
    }
    true
}

/// Top `top_k` peaks over all classes, by descending score. Each peak at
/// cell `(x, y)` becomes the box `(2xπ/W + Δθ, yπ/H + Δφ, α, β)` with the
/// offset and fov read at that cell; fovs are clamped into `[1e-6, π]`.
pub fn decode(t: &HeatmapTensor, top_k: usize) -> Vec<Detection> {
    let spec = t.spec();
    let (w, h) = (spec.width, spec.height);
    let mut peaks: Vec<(f64, usize, usize, usize)> = Vec::new();
    for c in 0..t.num_classes() {
        let plane = t.class_plane(c);
        for y in 0..h {
            for x in 0..w {
                let v = plane[y * w + x];
                if v > 0.0 && is_peak(plane, w, h, x, y) {
                    peaks.push((v, c, x, y));
                }
            }
        }
    }
    // stable: equal scores keep class, row, column order
    peaks.sort_by(|a, b| b.0.total_cmp(&a.0));
    peaks.truncate(top_k);
    peaks
        .into_iter()
        .filter_map(|(score, c, x, y)| {
            let (dt, dp) = t.offset(x, y);
            let (a, b) = t.fov(x, y);
            let theta = x as f64 * spec.theta_step() + dt;
            let phi = (y as f64 * spec.phi_step() + dp).clamp(0.0, PI);
            let clamp = |f: f64| if f.is_finite() { f.clamp(MIN_FOV, PI) } else { MIN_FOV };
            SphericalRect::wrapped(theta, phi, clamp(a), clamp(b))
                .ok()
                .map(|bbox| Detection {
                    class_id: c,
                    score,
                    bbox,
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::ErpImageSpec;
    use crate::detector::gt::{render_gt, GtAnnotation, RenderOptions};
    use crate::detector::tensor::HeatmapMode;

    #[test]
    fn uniform_scores_have_no_peaks() {
        let mut t = HeatmapTensor::zeros(ErpImageSpec::new(16, 8).unwrap(), 1, HeatmapMode::AsPrinted);
        for y in 0..8 {
            for x in 0..16 {
                t.set_score(0, x, y, 0.5);
            }
        }
        assert!(decode(&t, 100).is_empty());
    }

    #[test]
    fn peak_position_maps_to_angles() {
        let mut t = HeatmapTensor::zeros(ErpImageSpec::new(256, 128).unwrap(), 1, HeatmapMode::AsPrinted);
        t.set_score(0, 64, 32, 0.9);
        t.set_fov(64, 32, (0.4, 0.3));
        let d = decode(&t, 100);
        assert_eq!(d.len(), 1);
        assert!((d[0].bbox.theta() - PI / 2.0).abs() < 1e-15);
        assert!((d[0].bbox.phi() - PI / 4.0).abs() < 1e-15);
        assert_eq!((d[0].bbox.alpha(), d[0].bbox.beta()), (0.4, 0.3));
    }

    #[test]
    fn peaks_wrap_across_the_seam() {
        let mut t = HeatmapTensor::zeros(ErpImageSpec::new(16, 8).unwrap(), 1, HeatmapMode::AsPrinted);
        t.set_score(0, 0, 4, 0.5);
        t.set_score(0, 15, 4, 0.8);
        let d = decode(&t, 10);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].score, 0.8);
    }

    #[test]
    fn sorted_and_truncated() {
        let mut t = HeatmapTensor::zeros(ErpImageSpec::new(32, 16).unwrap(), 2, HeatmapMode::AsPrinted);
        t.set_score(0, 2, 2, 0.3);
        t.set_score(1, 10, 8, 0.9);
        t.set_score(0, 20, 12, 0.6);
        let d = decode(&t, 2);
        assert_eq!(d.iter().map(|d| d.score).collect::<Vec<_>>(), vec![0.9, 0.6]);
        assert_eq!(d[0].class_id, 1);
    }

    #[test]
    fn render_then_decode_recovers_the_box() {
        let spec = ErpImageSpec::new(256, 128).unwrap();
        let bbox = SphericalRect::new(0.01, 2.2, 0.7, 0.45).unwrap();
        let t = render_gt(&[GtAnnotation { class_id: 2, bbox }], spec, 3, RenderOptions::default()).unwrap();
        let d = decode(&t, 100);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].class_id, 2);
        assert_eq!((d[0].bbox.alpha(), d[0].bbox.beta()), (0.7, 0.45));
        assert!(d[0].bbox.center().angle_to(bbox.center()) < 1e-12);
    }
}
