//! Training losses: pixel-weighted focal loss, geodesic offset loss and L1
//! fov loss.

use super::gt::{gt_offset, GtAnnotation, LossWeights};
use super::tensor::HeatmapTensor;
use super::DetectorError;
use crate::criteria::pixel_weight;
use crate::geometry::sph_to_vec;
use crate::sum::pairwise_sum;

const P_MIN: f64 = 1e-12;

fn check_shapes(a: &HeatmapTensor, b: &HeatmapTensor) -> Result<(), DetectorError> {
    if a.spec() != b.spec() || a.num_classes() != b.num_classes() {
        return Err(DetectorError::ShapeMismatch);
    }
    Ok(())
}

/// Focal loss over every cell, each term weighted by its pixel's solid
/// angle and normalized by the number of positive (`y = 1`) cells.
pub fn focal_loss(pred: &HeatmapTensor, gt: &HeatmapTensor) -> Result<f64, DetectorError> {
    check_shapes(pred, gt)?;
    let spec = gt.spec();
    let w = spec.width;
    let n_pos = gt.scores().iter().filter(|&&y| y == 1.0).count();
    if n_pos == 0 {
        return Err(DetectorError::EmptyGt);
    }
    let mut rows = Vec::with_capacity(gt.num_classes() * spec.height);
    for c in 0..gt.num_classes() {
        let (p_plane, y_plane) = (pred.class_plane(c), gt.class_plane(c));
        for y in 0..spec.height {
            let weight = pixel_weight(y, spec);
            let terms: Vec<f64> = (y * w..(y + 1) * w)
                .map(|i| {
                    let p = p_plane[i].clamp(P_MIN, 1.0 - P_MIN);
                    let g = y_plane[i];
                    if g == 1.0 {
                        (1.0 - p).powi(2) * p.ln()
                    } else {
                        (1.0 - g).powi(4) * p * p * (1.0 - p).ln()
                    }
                })
                .collect();
            rows.push(weight * pairwise_sum(&terms));
        }
    }
    Ok(-pairwise_sum(&rows) / n_pos as f64)
}

/// Mean angle between the centers rebuilt from predicted and true offsets,
/// read at each annotation's center cell.
pub fn offset_loss(pred: &HeatmapTensor, gts: &[GtAnnotation]) -> Result<f64, DetectorError> {
    if gts.is_empty() {
        return Err(DetectorError::EmptyGt);
    }
    let spec = pred.spec();
    let terms: Vec<f64> = gts
        .iter()
        .map(|a| {
            let ((x, y), (dt, dp)) = gt_offset(a.bbox.theta(), a.bbox.phi(), spec);
            let (ct, cp) = (x as f64 * spec.theta_step(), y as f64 * spec.phi_step());
            let (pt, pp) = pred.offset(x, y);
            sph_to_vec(ct + pt, cp + pp).angle_to(sph_to_vec(ct + dt, cp + dp))
        })
        .collect();
    Ok(pairwise_sum(&terms) / gts.len() as f64)
}

/// Mean `|α − α̂| + |β − β̂|` at each annotation's center cell.
pub fn fov_loss(pred: &HeatmapTensor, gts: &[GtAnnotation]) -> Result<f64, DetectorError> {
    if gts.is_empty() {
        return Err(DetectorError::EmptyGt);
    }
    let spec = pred.spec();
    let terms: Vec<f64> = gts
        .iter()
        .map(|a| {
            let ((x, y), _) = gt_offset(a.bbox.theta(), a.bbox.phi(), spec);
            let (pa, pb) = pred.fov(x, y);
            (pa - a.bbox.alpha()).abs() + (pb - a.bbox.beta()).abs()
        })
        .collect();
    Ok(pairwise_sum(&terms) / gts.len() as f64)
}

pub fn total_loss(cls: f64, off: f64, fov: f64, weights: &LossWeights) -> f64 {
    cls + weights.lambda_off * off + weights.lambda_fov * fov
}
