//! Ground-truth heatmaps for a scene, saved and reloaded, then decoded back
//! into boxes; plus the losses of a noisy prediction.
//!
//! cargo run --example heatmap_roundtrip

use sphere_iou::criteria::ErpImageSpec;
use sphere_iou::detector::{
    decode, focal_loss, fov_loss, offset_loss, render_gt, total_loss, GtAnnotation, HeatmapTensor, LossWeights,
    RenderOptions,
};
use sphere_iou::geometry::SphericalRect;

fn main() {
    let spec = ErpImageSpec::new(256, 128).unwrap();
    let scene = [
        GtAnnotation { class_id: 0, bbox: SphericalRect::new(0.7, 1.4, 0.6, 0.5).unwrap() },
        GtAnnotation { class_id: 2, bbox: SphericalRect::new(3.9, 0.5, 0.9, 0.4).unwrap() },
        GtAnnotation { class_id: 1, bbox: SphericalRect::new(6.2, 2.3, 0.3, 0.3).unwrap() },
    ];
    let gt = render_gt(&scene, spec, 3, RenderOptions::default()).unwrap();

    let mut bytes = Vec::new();
    gt.write_to(&mut bytes).unwrap();
    let back = HeatmapTensor::read_from(bytes.as_slice()).unwrap();
    println!("tensor: {} bytes, identical after reload: {}", bytes.len(), back == gt);

    for d in decode(&back, 3) {
        println!("class {} score {:.2} {}", d.class_id, d.score, d.bbox);
    }

    // a blurred prediction: ground truth scores shrunk towards 0.5
    let mut pred = gt.clone();
    for c in 0..3 {
        for y in 0..spec.height {
            for x in 0..spec.width {
                pred.set_score(c, x, y, 0.25 + 0.5 * gt.score(c, x, y));
            }
        }
    }
    let (cls, off, fov) = (
        focal_loss(&pred, &gt).unwrap(),
        offset_loss(&pred, &scene).unwrap(),
        fov_loss(&pred, &scene).unwrap(),
    );
    println!("focal {cls:.4}  offset {off:.2e}  fov {fov:.2e}");
    println!("total (indoor weights) {:.4}", total_loss(cls, off, fov, &LossWeights::indoor()));
}
