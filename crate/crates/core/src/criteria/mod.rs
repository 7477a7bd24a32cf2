//! The biased IoU criteria used by earlier 360° detectors, and two numerical
//! oracles that the analytic IoU is checked against.
//!
//! Every criterion is reachable through [`CriterionId::evaluate`]; criteria
//! that work in ERP pixels take the grid from the evaluation context.

mod boxes;
mod erp;
mod integral;
mod monte_carlo;
mod planar;
mod sampled;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use boxes::{circle_of, iou_circle, iou_planar_rect, iou_sph_zone};
pub use erp::{angular_extent, erp_bbox, erp_bbox_exact, pixel_weight, AngularExtent, ErpImageSpec, PixelRect};
pub use integral::{iou_pixel_integral, pixel_integral_areas, PixelAreas};
pub use monte_carlo::{iou_monte_carlo, monte_carlo_counts, McCounts, McEstimate, MIN_SAMPLES};
pub use planar::{circle_intersection_area, periodic_overlap, polygon_intersection_area, signed_area};
pub use sampled::{iou_polygon_sampled, sampled_outline};

use crate::geometry::{iou, SphericalRect};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriterionError {
    #[error("ERP grid must be at least 2x2, got {width}x{height}")]
    InvalidImageSpec { width: usize, height: usize },
    #[error("polygon sample count must be a positive multiple of 4, got {0}")]
    InvalidSampleCount(usize),
    #[error("at least {MIN_SAMPLES} Monte Carlo samples are required, got {0}")]
    TooFewSamples(u64),
    #[error("a sampled boundary point lies at or beyond 90° from the tangent point")]
    ProjectionOverflow,
    #[error("no Monte Carlo sample fell inside either box")]
    ZeroUnion,
    #[error("{0}")]
    Parse(String),
}

pub const DEFAULT_POLYGON_POINTS: usize = 64;
pub const DEFAULT_MC_SAMPLES: u64 = 1_000_000;

/// One IoU criterion. Parameters that change the result are part of the id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriterionId {
    UnbiasedSpherical,
    PlanarRect,
    Circle,
    PolygonSampled(usize),
    SphZone,
    MonteCarlo { n_samples: u64, seed: u64 },
    PixelIntegral(ErpImageSpec),
}

impl CriterionId {
    /// The six columns of a criteria comparison table.
    pub fn table_columns(integral: ErpImageSpec) -> [CriterionId; 6] {
        [
            CriterionId::PlanarRect,
            CriterionId::PolygonSampled(DEFAULT_POLYGON_POINTS),
            CriterionId::Circle,
            CriterionId::SphZone,
            CriterionId::PixelIntegral(integral),
            CriterionId::UnbiasedSpherical,
        ]
    }

    /// Short column label.
    pub fn label(&self) -> &'static str {
        match self {
            CriterionId::UnbiasedSpherical => "Ours",
            CriterionId::PlanarRect => "Rectangle",
            CriterionId::Circle => "Circle",
            CriterionId::PolygonSampled(_) => "Polygon",
            CriterionId::SphZone => "SphIoU",
            CriterionId::MonteCarlo { .. } => "MonteCarlo",
            CriterionId::PixelIntegral(_) => "Sph.Integral",
        }
    }

    /// IoU of `b1` and `b2` under this criterion. `grid` is the ERP image the
    /// pixel-space criteria measure in.
    pub fn evaluate(
        &self,
        b1: &SphericalRect,
        b2: &SphericalRect,
        grid: ErpImageSpec,
    ) -> Result<f64, CriterionError> {
        Ok(match *self {
            CriterionId::UnbiasedSpherical => iou(b1, b2),
            CriterionId::PlanarRect => iou_planar_rect(b1, b2, grid),
            CriterionId::Circle => iou_circle(b1, b2, grid),
            CriterionId::PolygonSampled(n) => iou_polygon_sampled(b1, b2, n)?,
            CriterionId::SphZone => iou_sph_zone(b1, b2),
            CriterionId::MonteCarlo { n_samples, seed } => iou_monte_carlo(b1, b2, n_samples, seed)?.estimate,
            CriterionId::PixelIntegral(spec) => iou_pixel_integral(b1, b2, spec),
        })
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriterionId::UnbiasedSpherical => write!(f, "unbiased"),
            CriterionId::PlanarRect => write!(f, "planar"),
            CriterionId::Circle => write!(f, "circle"),
            CriterionId::PolygonSampled(n) => write!(f, "polygon:{n}"),
            CriterionId::SphZone => write!(f, "sphzone"),
            CriterionId::MonteCarlo { n_samples, seed } => write!(f, "montecarlo:{n_samples}:{seed}"),
            CriterionId::PixelIntegral(s) => write!(f, "integral:{s}"),
        }
    }
}

/// Parses `unbiased`, `planar`, `circle`, `polygon[:N]`, `sphzone`,
/// `montecarlo[:N[:SEED]]` and `integral[:WxH]`, plus the table labels.
impl FromStr for CriterionId {
    type Err = CriterionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let mut parts = lower.split(':');
        let head = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let bad = || CriterionError::Parse(format!("unknown criterion {s:?}"));
        let num = |a: &str| a.parse::<u64>().map_err(|_| bad());
        let id = match head {
            "unbiased" | "ours" | "sphere" => CriterionId::UnbiasedSpherical,
            "planar" | "rectangle" | "rect" => CriterionId::PlanarRect,
            "circle" => CriterionId::Circle,
            "polygon" => {
                let n = match args.first() {
                    Some(a) => num(a)? as usize,
                    None => DEFAULT_POLYGON_POINTS,
                };
                if n < 4 || n % 4 != 0 {
                    return Err(CriterionError::InvalidSampleCount(n));
                }
                CriterionId::PolygonSampled(n)
            }
            "sphzone" | "sphiou" | "zone" => CriterionId::SphZone,
            "montecarlo" | "mc" => CriterionId::MonteCarlo {
                n_samples: args.first().map(|a| num(a)).transpose()?.unwrap_or(DEFAULT_MC_SAMPLES),
                seed: args.get(1).map(|a| num(a)).transpose()?.unwrap_or(0),
            },
            "integral" | "sph.integral" | "pixel" => CriterionId::PixelIntegral(match args.first() {
                Some(a) => a.parse()?,
                None => ErpImageSpec::default(),
            }),
            _ => return Err(bad()),
        };
        if matches!(head, "unbiased" | "ours" | "sphere" | "planar" | "rectangle" | "rect" | "circle" | "sphzone" | "sphiou" | "zone")
            && !args.is_empty()
        {
            return Err(bad());
        }
        Ok(id)
    }
}
