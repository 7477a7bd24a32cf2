//! Unbiased intersection-over-union for spherical rectangles.
//!
//! Objects in 360° images are boxed by spherical rectangles `(θ, φ, α, β)`:
//! the patch of the unit sphere cut out by the four side planes of a viewing
//! frustum. This crate computes their IoU analytically and exactly
//! ([`geometry`]), ships the biased criteria used by earlier work together
//! with two numerical reference oracles ([`criteria`]), implements the
//! center-point detector's supervision and decoding math ([`detector`]),
//! and evaluates detections with COCO-style AP under any criterion
//! ([`eval`]).
//!
//! ```
//! use sphere_iou::geometry::{iou, SphericalRect};
//!
//! let a = SphericalRect::new(0.0, 1.5708, 0.5, 0.5).unwrap();
//! let b = SphericalRect::new(0.2, 1.5708, 0.5, 0.5).unwrap();
//! let v = iou(&a, &b);
//! assert!(v > 0.0 && v < 1.0);
//! ```

pub mod cli;
pub mod criteria;
pub mod detector;
pub mod eval;
pub mod geometry;
pub mod render;
mod sum;

pub use criteria::{CriterionId, ErpImageSpec};
pub use geometry::{iou, iou_matrix, SphericalRect, UnitVec3};
