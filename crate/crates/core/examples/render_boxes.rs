//! Boundaries of a few boxes drawn on an ERP canvas, written as SVG and PNG
//! into the system temp directory.
//!
//! cargo run --example render_boxes

use sphere_iou::criteria::ErpImageSpec;
use sphere_iou::detector::GtAnnotation;
use sphere_iou::geometry::SphericalRect;
use sphere_iou::render::{render_png, render_svg};

fn main() {
    let spec = ErpImageSpec::new(1024, 512).unwrap();
    let boxes: Vec<GtAnnotation> = [
        (0, 3.1, 1.57, 0.6, 0.6), // equator: nearly a rectangle
        (1, 1.2, 0.35, 0.6, 0.6), // near the pole: strongly curved
        (2, 0.05, 2.2, 0.8, 0.5), // across the seam
        (3, 4.7, 2.8, 1.2, 0.9),  // around the south pole
    ]
    .iter()
    .map(|&(c, t, p, a, b)| GtAnnotation { class_id: c, bbox: SphericalRect::new(t, p, a, b).unwrap() })
    .collect();
    let dir = std::env::temp_dir();
    let svg = dir.join("sphere_iou_boxes.svg");
    let png = dir.join("sphere_iou_boxes.png");
    std::fs::write(&svg, render_svg(&boxes, spec)).unwrap();
    render_png(&boxes, spec).save(&png).unwrap();
    println!("wrote {} and {}", svg.display(), png.display());
}
