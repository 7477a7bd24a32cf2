//! Exact IoU of two spherical rectangles, and what kind of overlap produced it.
//!
//! cargo run --example unbiased_iou

use sphere_iou::geometry::{intersect, iou, iou_matrix, SphericalRect};

fn main() {
    let a = SphericalRect::new(1.0, 1.3, 0.9, 0.6).unwrap();
    let b = SphericalRect::new(1.3, 1.1, 0.7, 0.8).unwrap();
    let x = intersect(&a, &b);
    println!("{a}\n{b}");
    println!("areas {:.6} {:.6} sr, overlap {:.6} sr ({:?})", a.area(), b.area(), x.area, x.kind);
    println!("IoU {:.6}", iou(&a, &b));

    // boxes across the θ = 0 seam need no special handling
    let left = SphericalRect::new(6.2, 1.57, 0.5, 0.5).unwrap();
    let right = SphericalRect::new(0.1, 1.57, 0.5, 0.5).unwrap();
    println!("across the seam: IoU {:.6}", iou(&left, &right));

    let m = iou_matrix(&[a, b, left], &[a, right]);
    for row in m {
        println!("{}", row.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join("  "));
    }
}
