//! Equirectangular (ERP) image grids, per-pixel solid angles and the tight
//! ERP bounding box of a spherical rectangle.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CriterionError;
use crate::geometry::{rect_vertices, vec_to_sph, wrap_azimuth, SphericalRect, UnitVec3, Vec3};

/// Size of an equirectangular grid: `width` columns span azimuth `[0, 2π)`,
/// `height` rows span polar angle `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ErpImageSpec {
    pub width: usize,
    pub height: usize,
}

impl ErpImageSpec {
    pub fn new(width: usize, height: usize) -> Result<Self, CriterionError> {
        if width < 2 || height < 2 {
            return Err(CriterionError::InvalidImageSpec { width, height });
        }
        if width != 2 * height {
            log::warn!("ERP grid {width}x{height} is not 2:1; pixels will not be square in angle");
        }
        Ok(Self { width, height })
    }

    /// Azimuth per column.
    pub fn theta_step(&self) -> f64 {
        TAU / self.width as f64
    }

    /// Polar angle per row.
    pub fn phi_step(&self) -> f64 {
        PI / self.height as f64
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }
}

impl Default for ErpImageSpec {
    fn default() -> Self {
        Self {
            width: 1024,
            height: 512,
        }
    }
}

impl fmt::Display for ErpImageSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

impl FromStr for ErpImageSpec {
    type Err = CriterionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CriterionError::Parse(format!("expected WIDTHxHEIGHT, got {s:?}"));
        let (w, h) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
        let w = w.trim().parse().map_err(|_| bad())?;
        let h = h.trim().parse().map_err(|_| bad())?;
        ErpImageSpec::new(w, h)
    }
}

/// Solid angle of any pixel in row `y`:
/// `(cos(yπ/H) − cos((y+1)π/H)) · 2π/W`.
pub fn pixel_weight(y: usize, spec: ErpImageSpec) -> f64 {
    let h = spec.height as f64;
    let a = y as f64 * PI / h;
    let b = (y as f64 + 1.0) * PI / h;
    // cos a − cos b written as a product to keep full precision near the poles
    2.0 * ((a + b) / 2.0).sin() * ((b - a) / 2.0).sin() * TAU / spec.width as f64
}

/// Angular extent of a spherical rectangle in ERP coordinates.
///
/// `theta_min ∈ [0, 2π)` and `theta_max ≤ theta_min + 2π`; the range wraps
/// past the seam when `theta_max > 2π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularExtent {
    pub theta_min: f64,
    pub theta_max: f64,
    pub phi_min: f64,
    pub phi_max: f64,
}

impl AngularExtent {
    pub fn theta_span(&self) -> f64 {
        self.theta_max - self.theta_min
    }
    pub fn phi_span(&self) -> f64 {
        self.phi_max - self.phi_min
    }
    pub fn is_full_azimuth(&self) -> bool {
        self.theta_span() >= TAU
    }
}

/// An axis-aligned rectangle in continuous ERP pixel coordinates.
///
/// `x_min ∈ [0, W)`; `x_max` may exceed `W`, meaning the box continues past
/// the right edge and wraps to column 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PixelRect {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
}

impl PixelRect {
    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }
    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }
    pub fn area(&self) -> f64 {
        self.width().max(0.0) * self.height().max(0.0)
    }
    pub fn is_wrapped(&self, spec: ErpImageSpec) -> bool {
        self.x_max > spec.width as f64
    }
    pub fn center(&self) -> (f64, f64) {
        (
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
        )
    }
}

/// Exact angular bounds of the rectangle.
///
/// Polar extremes come from the corners and from the highest/lowest point
/// of each side's great circle when that point lies on the side. A pole
/// inside the box pins the polar bound and opens the azimuth to the full
/// circle. Otherwise the sides are monotone in azimuth, so the azimuth range
/// is spanned by the corners.
pub fn angular_extent(rect: &SphericalRect) -> AngularExtent {
    let planes = rect.boundary();
    let corners = rect_vertices(rect).ok();
    let north = rect.contains(UnitVec3::Z);
    let south = rect.contains(UnitVec3::Z.antipode());

    let mut z_hi = f64::NEG_INFINITY;
    let mut z_lo = f64::INFINITY;
    if let Some(c) = &corners {
        for v in c {
            z_hi = z_hi.max(v.z());
            z_lo = z_lo.min(v.z());
        }
    }
    let z_axis = Vec3::new(0.0, 0.0, 1.0);
    for n in planes.as_array() {
        // highest point of the great circle {p : p·n = 0}
        if let Some(top) = (z_axis - n.as_vec() * n.z()).normalized() {
            for p in [top, top.antipode()] {
                if rect.contains(p) {
                    z_hi = z_hi.max(p.z());
                    z_lo = z_lo.min(p.z());
                }
            }
        }
    }
    let phi_min = if north { 0.0 } else { z_hi.clamp(-1.0, 1.0).acos() };
    let phi_max = if south { PI } else { z_lo.clamp(-1.0, 1.0).acos() };

    let (theta_min, theta_max) = match (&corners, north || south) {
        (Some(c), false) => {
            let tc = rect.theta();
            let mut lo = 0.0f64;
            let mut hi = 0.0f64;
            for v in c {
                let (t, _) = vec_to_sph(*v);
                let d = wrap_signed(t - tc);
                lo = lo.min(d);
                hi = hi.max(d);
            }
            let start = wrap_azimuth(tc + lo);
            (start, start + (hi - lo))
        }
        _ => (0.0, TAU),
    };
    AngularExtent {
        theta_min,
        theta_max,
        phi_min,
        phi_max,
    }
}

/// Wraps an angle difference into `(−π, π]`.
pub(crate) fn wrap_signed(d: f64) -> f64 {
    let w = wrap_azimuth(d + PI) - PI;
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

/// Tight ERP box in continuous pixel coordinates, without rounding.
pub fn erp_bbox_exact(rect: &SphericalRect, spec: ErpImageSpec) -> PixelRect {
    let e = angular_extent(rect);
    let sx = spec.width as f64 / TAU;
    let sy = spec.height as f64 / PI;
    PixelRect {
        x_min: e.theta_min * sx,
        x_max: e.theta_max * sx,
        y_min: e.phi_min * sy,
        y_max: e.phi_max * sy,
    }
}

/// Tight pixel-aligned ERP box around the rectangle (outward-rounded to
/// whole pixels).
pub fn erp_bbox(rect: &SphericalRect, spec: ErpImageSpec) -> PixelRect {
    let e = angular_extent(rect);
    let sx = spec.width as f64 / TAU;
    let sy = spec.height as f64 / PI;
    let (x_min, x_max) = if e.is_full_azimuth() {
        (0.0, spec.width as f64)
    } else {
        let x0 = (e.theta_min * sx).floor();
        let x1 = (e.theta_max * sx).ceil();
        (x0, x1.min(x0 + spec.width as f64))
    };
    PixelRect {
        x_min,
        x_max,
        y_min: (e.phi_min * sy).floor().max(0.0),
        y_max: (e.phi_max * sy).ceil().min(spec.height as f64),
    }
}
