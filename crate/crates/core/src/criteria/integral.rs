//! Pixel-integral IoU oracle: membership of every ERP pixel center, weighted
//! by the pixel's solid angle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::erp::{pixel_weight, ErpImageSpec};
use crate::geometry::{SphericalRect, CONTAINMENT_EPS};
use crate::sum::pairwise_sum;

/// Solid angles accumulated over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PixelAreas {
    pub first: f64,
    pub second: f64,
    pub both: f64,
}

impl PixelAreas {
    pub fn iou(&self) -> f64 {
        let union = self.first + self.second - self.both;
        if union <= 0.0 {
            0.0
        } else {
            (self.both / union).clamp(0.0, 1.0)
        }
    }
}

/// Side-plane test `p·n ≥ −ε` for a whole row, with
/// `p·n = a cos θ + b sin θ + c`.
struct RowPlanes {
    coef: [[f64; 3]; 4],
}

impl RowPlanes {
    fn new(rect: &SphericalRect, sin_phi: f64, cos_phi: f64) -> Option<Self> {
        let mut coef = [[0.0; 3]; 4];
        for (k, n) in rect.boundary().as_array().iter().enumerate() {
            let c = [sin_phi * n.x(), sin_phi * n.y(), cos_phi * n.z()];
            // the row never reaches this half-space
            if c[0].hypot(c[1]) + c[2] < -CONTAINMENT_EPS {
                return None;
            }
            coef[k] = c;
        }
        Some(Self { coef })
    }

    #[inline]
    fn contains(&self, cos_t: f64, sin_t: f64) -> bool {
        self.coef
            .iter()
            .all(|c| c[0] * cos_t + c[1] * sin_t + c[2] >= -CONTAINMENT_EPS)
    }
}

pub fn pixel_integral_areas(b1: &SphericalRect, b2: &SphericalRect, spec: ErpImageSpec) -> PixelAreas {
    let trig: Vec<(f64, f64)> = (0..spec.width)
        .map(|x| {
            let (s, c) = ((x as f64 + 0.5) * spec.theta_step()).sin_cos();
            (c, s)
        })
        .collect();
    let rows: Vec<[f64; 3]> = (0..spec.height)
        .into_par_iter()
        .map(|y| {
            let (sp, cp) = ((y as f64 + 0.5) * spec.phi_step()).sin_cos();
            let r1 = RowPlanes::new(b1, sp, cp);
            let r2 = RowPlanes::new(b2, sp, cp);
            let (mut n1, mut n2, mut nb) = (0u64, 0u64, 0u64);
            match (&r1, &r2) {
                (None, None) => {}
                (Some(r), None) => n1 = trig.iter().filter(|t| r.contains(t.0, t.1)).count() as u64,
                (None, Some(r)) => n2 = trig.iter().filter(|t| r.contains(t.0, t.1)).count() as u64,
                (Some(r1), Some(r2)) => {
                    for &(c, s) in &trig {
                        let i1 = r1.contains(c, s);
                        let i2 = r2.contains(c, s);
                        n1 += i1 as u64;
                        n2 += i2 as u64;
                        nb += (i1 && i2) as u64;
                    }
                }
            }
            let w = pixel_weight(y, spec);
            [w * n1 as f64, w * n2 as f64, w * nb as f64]
        })
        .collect();
    let col = |k: usize| pairwise_sum(&rows.iter().map(|r| r[k]).collect::<Vec<_>>());
    PixelAreas {
        first: col(0),
        second: col(1),
        both: col(2),
    }
}

pub fn iou_pixel_integral(b1: &SphericalRect, b2: &SphericalRect, spec: ErpImageSpec) -> f64 {
    pixel_integral_areas(b1, b2, spec).iou()
}
