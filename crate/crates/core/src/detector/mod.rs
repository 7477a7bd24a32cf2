//! Supervision and decoding math for a center-point detector on ERP
//! heatmaps: ground-truth cells and offsets, the splat radius, losses, peak
//! decoding and planar-to-spherical box conversion.

mod convert;
mod decode;
mod gt;
mod loss;
mod tensor;

use thiserror::Error;

pub use convert::{planar_to_spherical, Conversion, ConversionCase};
pub use decode::{decode, Detection, DEFAULT_TOP_K, MIN_FOV};
pub use gt::{
    bisect_inflation, concentric_iou, gt_offset, heatmap_value, radius, render_gt, GtAnnotation,
    LossWeights, RadiusBreakdown, RenderOptions,
};
pub use loss::{focal_loss, fov_loss, offset_loss, total_loss};
pub use tensor::{HeatmapMode, HeatmapTensor};

#[derive(Debug, Error)]
pub enum DetectorError {
    #[error("ground truth has no positive cell")]
    EmptyGt,
    #[error("tensor shapes differ")]
    ShapeMismatch,
    #[error("class {class_id} is outside 0..{num_classes}")]
    InvalidClass { class_id: usize, num_classes: usize },
    #[error("box has zero width or height")]
    DegenerateRect,
    #[error("bad tensor file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl PartialEq for DetectorError {
    fn eq(&self, other: &Self) -> bool {
        use DetectorError::*;
        match (self, other) {
            (EmptyGt, EmptyGt) | (ShapeMismatch, ShapeMismatch) | (DegenerateRect, DegenerateRect) => true,
            (
                InvalidClass { class_id: a, num_classes: b },
                InvalidClass { class_id: c, num_classes: d },
            ) => a == c && b == d,
            (Format(a), Format(b)) => a == b,
            (Io(a), Io(b)) => a.kind() == b.kind(),
            _ => false,
        }
    }
}
