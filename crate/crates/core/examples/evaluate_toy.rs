//! AP, AP50 and AP75 on a small JSON-lines dataset, under the exact IoU and
//! under the planar-rectangle IoU.
//!
//! cargo run --example evaluate_toy

use sphere_iou::criteria::CriterionId;
use sphere_iou::eval::{evaluate, parse_annotations, parse_detections, EvalConfig};

const GT: &str = r#"{"angle_unit": "degrees"}
{"image_id": "office", "class_id": 0, "theta": 40, "phi": 80, "alpha": 30, "beta": 25}
{"image_id": "office", "class_id": 1, "theta": 200, "phi": 100, "alpha": 20, "beta": 40}
{"image_id": "office", "class_id": 0, "theta": 120, "phi": 12, "alpha": 40, "beta": 35}
{"image_id": "hall", "class_id": 1, "theta": 300, "phi": 70, "alpha": 25, "beta": 25}
"#;

const DET: &str = r#"{"angle_unit": "degrees"}
{"image_id": "office", "class_id": 0, "theta": 41, "phi": 80, "alpha": 30, "beta": 24, "score": 0.95}
{"image_id": "office", "class_id": 0, "theta": 170, "phi": 12, "alpha": 40, "beta": 35, "score": 0.80}
{"image_id": "office", "class_id": 1, "theta": 202, "phi": 101, "alpha": 22, "beta": 40, "score": 0.70}
{"image_id": "hall", "class_id": 1, "theta": 300, "phi": 72, "alpha": 20, "beta": 25, "score": 0.60}
{"image_id": "hall", "class_id": 0, "theta": 10, "phi": 90, "alpha": 20, "beta": 20, "score": 0.30}
"#;

fn main() {
    let gts = parse_annotations(GT).unwrap();
    let dets = parse_detections(DET).unwrap().records;
    for criterion in [CriterionId::UnbiasedSpherical, CriterionId::PlanarRect] {
        let report = evaluate(&dets, &gts, &EvalConfig::with_criterion(criterion)).unwrap();
        println!("{}", report.to_text());
    }
}
