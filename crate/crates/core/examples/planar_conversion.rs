//! Turning the axis-aligned ERP box of a conventional detector into the
//! spherical rectangle it tightly bounds.
//!
//! cargo run --example planar_conversion

use sphere_iou::criteria::{erp_bbox, erp_bbox_exact, ErpImageSpec};
use sphere_iou::detector::planar_to_spherical;
use sphere_iou::geometry::{iou, SphericalRect};

fn main() {
    let spec = ErpImageSpec::new(1024, 512).unwrap();
    for truth in [
        SphericalRect::new(1.0, 1.5, 0.6, 0.4).unwrap(),
        SphericalRect::new(4.0, 0.6, 0.8, 0.5).unwrap(),
        SphericalRect::new(2.5, 2.3, 1.1, 0.9).unwrap(),
    ] {
        let exact = planar_to_spherical(&erp_bbox_exact(&truth, spec), spec).unwrap();
        let snapped = planar_to_spherical(&erp_bbox(&truth, spec), spec).unwrap();
        println!("truth     {truth}");
        println!("  exact   {} ({:?}) IoU {:.9}", exact.bbox, exact.case, iou(&truth, &exact.bbox));
        println!("  pixels  {} IoU {:.6}", snapped.bbox, iou(&truth, &snapped.bbox));
    }
}
