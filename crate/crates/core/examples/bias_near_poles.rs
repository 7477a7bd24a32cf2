//! The same pair of boxes moved from the equator towards the north pole.
//! The analytic IoU stays put; the planar and zone criteria drift.
//!
//! cargo run --release --example bias_near_poles

use sphere_iou::criteria::{iou_monte_carlo, CriterionId, ErpImageSpec};
use sphere_iou::geometry::{iou, SphericalRect};

fn main() {
    let grid = ErpImageSpec::new(2048, 1024).unwrap();
    let cols = [CriterionId::PlanarRect, CriterionId::Circle, CriterionId::SphZone];
    println!("{:>6} {:>9} {:>9} {:>9} {:>9} {:>9}", "phi", "Ours", "MC", "Rectangle", "Circle", "SphIoU");
    for phi in [1.57, 1.2, 0.9, 0.6, 0.4, 0.25] {
        let a = SphericalRect::new(2.0, phi, 0.6, 0.5).unwrap();
        // same relative offset, expressed in the box's own frame
        let b = SphericalRect::new(2.0 + 0.15 / phi.sin(), phi - 0.05, 0.6, 0.5).unwrap();
        let mc = iou_monte_carlo(&a, &b, 2_000_000, 0).unwrap();
        let biased: Vec<String> = cols.iter().map(|c| format!("{:>9.4}", c.evaluate(&a, &b, grid).unwrap())).collect();
        println!("{phi:>6.2} {:>9.4} {:>9.4} {}", iou(&a, &b), mc.estimate, biased.join(" "));
    }
}
