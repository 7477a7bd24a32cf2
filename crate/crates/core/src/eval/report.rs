use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ap::average_precision;
use super::matching::{greedy_match, iou_table, rank_by_score};
use super::{Annotations, DetectionRecord, EvalError};
use crate::criteria::{CriterionId, ErpImageSpec};
use crate::detector::GtAnnotation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub criterion: CriterionId,
    /// Strictly increasing, inside (0, 1).
    pub iou_thresholds: Vec<f64>,
    /// Highest-scoring detections kept per image, over all classes.
    pub max_dets_per_image: usize,
    /// Grid for the criteria that measure in ERP pixels.
    pub grid: ErpImageSpec,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            criterion: CriterionId::UnbiasedSpherical,
            iou_thresholds: (0..10).map(|k| 0.5 + 0.05 * k as f64).collect(),
            max_dets_per_image: 100,
            grid: ErpImageSpec::default(),
        }
    }
}

impl EvalConfig {
    pub fn with_criterion(criterion: CriterionId) -> Self {
        EvalConfig {
            criterion,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        let t = &self.iou_thresholds;
        if t.is_empty() {
            return Err(EvalError::InvalidConfig("no IoU thresholds".into()));
        }
        if t.iter().any(|&x| !(x > 0.0 && x < 1.0)) || t.windows(2).any(|w| w[0] >= w[1]) {
            return Err(EvalError::InvalidConfig(format!(
                "thresholds must be strictly increasing inside (0, 1): {t:?}"
            )));
        }
        if self.max_dets_per_image == 0 {
            return Err(EvalError::InvalidConfig("max_dets_per_image must be positive".into()));
        }
        Ok(())
    }

    fn threshold_index(&self, t: f64) -> Option<usize> {
        self.iou_thresholds.iter().position(|&x| (x - t).abs() < 1e-9)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class_id: usize,
    pub n_gt: usize,
    pub n_det: usize,
    pub ap_per_threshold: Vec<f64>,
    pub ap: f64,
    pub ap50: Option<f64>,
    pub ap75: Option<f64>,
}

/// One matching decision at one threshold. `det_index` points into the
/// detections passed to [`evaluate`]; `gt_index` into the image's GT list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchLogEntry {
    pub image_id: String,
    pub class_id: usize,
    pub threshold: f64,
    pub det_index: usize,
    pub score: f64,
    pub gt_index: Option<usize>,
    pub iou: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub criterion: String,
    pub iou_thresholds: Vec<f64>,
    pub max_dets_per_image: usize,
    /// Classes with at least one GT box, ascending.
    pub classes: Vec<ClassReport>,
    /// Classes that only occur in detections; their AP is undefined and
    /// left out of every mean.
    pub undefined_classes: Vec<usize>,
    pub ap_per_threshold: Vec<f64>,
    pub ap: f64,
    pub ap50: Option<f64>,
    pub ap75: Option<f64>,
    pub matches: Vec<MatchLogEntry>,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report holds only finite numbers")
    }

    /// Aligned table of per-class and overall AP, AP50, AP75.
    pub fn to_text(&self) -> String {
        let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.4}"));
        let mut s = String::new();
        let _ = writeln!(s, "criterion: {}", self.criterion);
        let _ = writeln!(s, "{:>8} {:>6} {:>6} {:>8} {:>8} {:>8}", "class", "n_gt", "n_det", "AP", "AP50", "AP75");
        for c in &self.classes {
            let _ = writeln!(
                s,
                "{:>8} {:>6} {:>6} {:>8} {:>8} {:>8}",
                c.class_id,
                c.n_gt,
                c.n_det,
                fmt(Some(c.ap)),
                fmt(c.ap50),
                fmt(c.ap75)
            );
        }
        let _ = writeln!(
            s,
            "{:>8} {:>6} {:>6} {:>8} {:>8} {:>8}",
            "all",
            self.classes.iter().map(|c| c.n_gt).sum::<usize>(),
            self.classes.iter().map(|c| c.n_det).sum::<usize>(),
            fmt(Some(self.ap)),
            fmt(self.ap50),
            fmt(self.ap75)
        );
        for c in &self.undefined_classes {
            let _ = writeln!(s, "class {c}: no ground truth, AP undefined and excluded");
        }
        s
    }
}

struct Group<'a> {
    image_id: &'a str,
    class_id: usize,
    /// Indices into the caller's detections, best score first.
    dets: Vec<usize>,
    /// Indices into the image's GT list.
    gts: Vec<usize>,
    ious: Vec<Vec<f64>>,
}

fn mean(v: &[f64]) -> f64 {
    crate::sum::pairwise_sum(v) / v.len() as f64
}

/// COCO-style evaluation of `dets` against `gts`.
///
/// Per image only the `max_dets_per_image` best detections count. Per class
/// and threshold the greedy matches of all images are pooled and ranked by
/// score (ties by image id, then by rank inside the image) for
/// [`average_precision`]. AP is the mean over thresholds and classes that
/// have ground truth. With no such class every aggregate is 0.
pub fn evaluate(dets: &[DetectionRecord], gts: &Annotations, config: &EvalConfig) -> Result<EvalReport, EvalError> {
    config.validate()?;

    let mut det_by_image: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, d) in dets.iter().enumerate() {
        det_by_image.entry(d.image_id.as_str()).or_default().push(i);
    }
    for idx in det_by_image.values_mut() {
        let scores: Vec<f64> = idx.iter().map(|&i| dets[i].score).collect();
        let ranked: Vec<usize> = rank_by_score(&scores).into_iter().map(|k| idx[k]).collect();
        *idx = ranked;
        idx.truncate(config.max_dets_per_image);
    }

    let no_gt: Vec<GtAnnotation> = Vec::new();
    let images: BTreeSet<&str> = gts
        .by_image
        .keys()
        .map(String::as_str)
        .chain(det_by_image.keys().copied())
        .collect();
    let mut groups = Vec::new();
    for image in images {
        let image_gts = gts.by_image.get(image).unwrap_or(&no_gt);
        let image_dets = det_by_image.get(image).map_or(&[][..], Vec::as_slice);
        let classes: BTreeSet<usize> = image_gts
            .iter()
            .map(|g| g.class_id)
            .chain(image_dets.iter().map(|&i| dets[i].class_id))
            .collect();
        for class_id in classes {
            groups.push(Group {
                image_id: image,
                class_id,
                dets: image_dets.iter().copied().filter(|&i| dets[i].class_id == class_id).collect(),
                gts: (0..image_gts.len()).filter(|&g| image_gts[g].class_id == class_id).collect(),
                ious: Vec::new(),
            });
        }
    }

    let tables: Vec<_> = groups
        .par_iter()
        .map(|g| {
            let image_gts = gts.by_image.get(g.image_id).unwrap_or(&no_gt);
            let d: Vec<DetectionRecord> = g.dets.iter().map(|&i| dets[i].clone()).collect();
            let t: Vec<GtAnnotation> = g.gts.iter().map(|&i| image_gts[i]).collect();
            iou_table(&d, &t, config.criterion, config.grid)
        })
        .collect();
    for (g, t) in groups.iter_mut().zip(tables) {
        g.ious = t?;
    }

    let mut n_gt: BTreeMap<usize, usize> = BTreeMap::new();
    let mut n_det: BTreeMap<usize, usize> = BTreeMap::new();
    for g in &groups {
        *n_gt.entry(g.class_id).or_default() += g.gts.len();
        *n_det.entry(g.class_id).or_default() += g.dets.len();
    }

    let n_thr = config.iou_thresholds.len();
    // pooled (score, tp) per class and threshold, in group then rank order
    let mut pooled: BTreeMap<usize, Vec<Vec<(f64, bool)>>> =
        n_gt.keys().map(|&c| (c, vec![Vec::new(); n_thr])).collect();
    let mut matches = Vec::new();
    for g in &groups {
        // group detections are already ranked, so local order = rank order
        let scores: Vec<f64> = g.dets.iter().map(|&i| dets[i].score).collect();
        for (ti, &thr) in config.iou_thresholds.iter().enumerate() {
            for m in greedy_match(&scores, &g.ious, thr) {
                let det_index = g.dets[m.det_index];
                pooled.get_mut(&g.class_id).expect("class present")[ti].push((scores[m.det_index], m.is_tp()));
                matches.push(MatchLogEntry {
                    image_id: g.image_id.to_string(),
                    class_id: g.class_id,
                    threshold: thr,
                    det_index,
                    score: dets[det_index].score,
                    gt_index: m.gt_index.map(|k| g.gts[k]),
                    iou: m.iou,
                });
            }
        }
    }

    let i50 = config.threshold_index(0.5);
    let i75 = config.threshold_index(0.75);
    let mut classes = Vec::new();
    let mut undefined_classes = Vec::new();
    for (&class_id, per_thr) in &pooled {
        let gt_count = n_gt[&class_id];
        if gt_count == 0 {
            undefined_classes.push(class_id);
            continue;
        }
        let ap_per_threshold = per_thr
            .iter()
            .map(|d| average_precision(d, gt_count))
            .collect::<Result<Vec<f64>, _>>()?;
        classes.push(ClassReport {
            class_id,
            n_gt: gt_count,
            n_det: n_det[&class_id],
            ap: mean(&ap_per_threshold),
            ap50: i50.map(|i| ap_per_threshold[i]),
            ap75: i75.map(|i| ap_per_threshold[i]),
            ap_per_threshold,
        });
    }

    let ap_per_threshold: Vec<f64> = (0..n_thr)
        .map(|t| {
            if classes.is_empty() {
                0.0
            } else {
                mean(&classes.iter().map(|c| c.ap_per_threshold[t]).collect::<Vec<_>>())
            }
        })
        .collect();
    Ok(EvalReport {
        criterion: config.criterion.to_string(),
        iou_thresholds: config.iou_thresholds.clone(),
        max_dets_per_image: config.max_dets_per_image,
        ap: mean(&ap_per_threshold),
        ap50: i50.map(|i| ap_per_threshold[i]),
        ap75: i75.map(|i| ap_per_threshold[i]),
        ap_per_threshold,
        classes,
        undefined_classes,
        matches,
    })
}
