use serde::{Deserialize, Serialize};

use super::DetectionRecord;
use crate::criteria::{CriterionError, CriterionId, ErpImageSpec};
use crate::detector::GtAnnotation;

/// Outcome for one detection. `gt_index` is `None` for a false positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchDecision {
    pub det_index: usize,
    pub gt_index: Option<usize>,
    pub iou: Option<f64>,
}

impl MatchDecision {
    pub fn is_tp(&self) -> bool {
        self.gt_index.is_some()
    }
}

/// Indices of `scores` by descending score; equal scores keep input order.
pub(crate) fn rank_by_score(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    idx
}

/// Greedy one-to-one matching on a precomputed table, `ious[d][g]`.
///
/// Detections are visited by descending score; each takes the unmatched GT
/// with the highest IoU at or above `threshold`, the lowest GT index on
/// ties. Decisions come back in visiting order.
pub fn greedy_match(scores: &[f64], ious: &[Vec<f64>], threshold: f64) -> Vec<MatchDecision> {
    let n_gt = ious.first().map_or(0, Vec::len);
    let mut taken = vec![false; n_gt];
    rank_by_score(scores)
        .into_iter()
        .map(|d| {
            let mut best: Option<(usize, f64)> = None;
            for (g, &v) in ious[d].iter().enumerate() {
                if taken[g] || !(v >= threshold) {
                    continue;
                }
                if best.map_or(true, |(_, b)| v > b) {
                    best = Some((g, v));
                }
            }
            if let Some((g, _)) = best {
                taken[g] = true;
            }
            MatchDecision {
                det_index: d,
                gt_index: best.map(|(g, _)| g),
                iou: best.map(|(_, v)| v),
            }
        })
        .collect()
}

pub(crate) fn iou_table(
    dets: &[DetectionRecord],
    gts: &[GtAnnotation],
    criterion: CriterionId,
    grid: ErpImageSpec,
) -> Result<Vec<Vec<f64>>, CriterionError> {
    dets.iter()
        .map(|d| gts.iter().map(|g| criterion.evaluate(&d.bbox, &g.bbox, grid)).collect())
        .collect()
}

/// Matches one image's detections of one class against that image's GT of
/// the same class.
pub fn match_detections(
    dets: &[DetectionRecord],
    gts: &[GtAnnotation],
    criterion: CriterionId,
    grid: ErpImageSpec,
    threshold: f64,
) -> Result<Vec<MatchDecision>, CriterionError> {
    let table = iou_table(dets, gts, criterion, grid)?;
    let scores: Vec<f64> = dets.iter().map(|d| d.score).collect();
    Ok(greedy_match(&scores, &table, threshold))
}
