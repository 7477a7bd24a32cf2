//! Ground-truth supervision: cell offsets, the splat radius and heatmap
//! rendering.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::tensor::{HeatmapMode, HeatmapTensor};
use super::DetectorError;
use crate::criteria::ErpImageSpec;
use crate::geometry::{fov_area, iou, sph_to_vec, wrap_azimuth, SphericalRect};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GtAnnotation {
    pub class_id: usize,
    pub bbox: SphericalRect,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossWeights {
    pub lambda_off: f64,
    pub lambda_fov: f64,
    /// IoU that every box centered inside the splat radius must reach.
    pub iou_threshold: f64,
}

impl LossWeights {
    /// Weights used for the real indoor dataset.
    pub fn indoor() -> Self {
        Self {
            lambda_off: 60.0,
            lambda_fov: 10.0,
            iou_threshold: 0.7,
        }
    }

    /// Weights used for the synthetic datasets.
    pub fn synthetic() -> Self {
        Self {
            lambda_off: 1.0,
            lambda_fov: 0.1,
            iou_threshold: 0.7,
        }
    }
}

impl Default for LossWeights {
    fn default() -> Self {
        Self::indoor()
    }
}

/// Heatmap cell holding the center and the sub-cell remainder,
/// `0 ≤ Δθ < 2π/W`, `0 ≤ Δφ < π/H`.
///
/// `φ̂ = π` lands in the last row with `Δφ` just below one row step.
pub fn gt_offset(theta: f64, phi: f64, spec: ErpImageSpec) -> ((usize, usize), (f64, f64)) {
    let (w, h) = (spec.width, spec.height);
    let (tx, ty) = (spec.theta_step(), spec.phi_step());
    let theta = wrap_azimuth(theta);
    let phi = phi.clamp(0.0, PI);

    // floor, then nudge by one cell where rounding put the remainder outside
    // [0, step)
    let mut x = ((theta * w as f64 / TAU).floor() as usize).min(w - 1);
    while x > 0 && theta - x as f64 * tx < 0.0 {
        x -= 1;
    }
    while x + 1 < w && theta - x as f64 * tx >= tx {
        x += 1;
    }
    let mut y = ((phi * h as f64 / PI).floor() as usize).min(h - 1);
    while y > 0 && phi - y as f64 * ty < 0.0 {
        y -= 1;
    }
    while y + 1 < h && phi - y as f64 * ty >= ty {
        y += 1;
    }
    let dx = (theta - x as f64 * tx).clamp(0.0, tx.next_down());
    let dy = (phi - y as f64 * ty).clamp(0.0, ty.next_down());
    ((x, y), (dx, dy))
}

/// Candidate radii as evaluated from the three closed forms, and the
/// radius actually used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusBreakdown {
    /// Raw closed-form values (NaN when the formula leaves its domain).
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub gamma_c: f64,
    pub a_valid: bool,
    pub b_valid: bool,
    pub c_valid: bool,
    pub gamma: f64,
    /// No candidate was usable and `gamma` came from bisection on the
    /// inflated-box relation.
    pub used_fallback: bool,
}

const RADIUS_CHECK_TOL: f64 = 1e-6;

/// IoU between the `(α, β)` box and the concentric box with both fovs
/// changed by `2γ`. Real boxes go through the analytic IoU; fovs past π
/// only have the area ratio, which is what the closed forms encode.
pub fn concentric_iou(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let (a2, b2) = (alpha + 2.0 * gamma, beta + 2.0 * gamma);
    if a2 <= 0.0 || b2 <= 0.0 {
        return 0.0;
    }
    if a2 <= PI && b2 <= PI {
        let r1 = SphericalRect::new(0.0, PI / 2.0, alpha, beta);
        let r2 = SphericalRect::new(0.0, PI / 2.0, a2, b2);
        if let (Ok(r1), Ok(r2)) = (r1, r2) {
            return iou(&r1, &r2);
        }
    }
    let (small, big) = (fov_area(alpha, beta), fov_area(a2, b2));
    small.min(big) / small.max(big)
}

/// Splat radius for a box with fovs `(α, β)` at IoU threshold `t`.
///
/// The three closed forms are evaluated exactly as derived. Case a
/// (prediction inflated by `2γ`) and case b (deflated by `2γ`) are accepted
/// only if they reproduce IoU `t` within 1e-6; case c has no stated
/// relation and is accepted when finite and non-negative. The radius is the
/// smallest accepted candidate, floored at 0.
pub fn radius(alpha: f64, beta: f64, t: f64) -> RadiusBreakdown {
    let s = (alpha / 2.0).sin() * (beta / 2.0).sin();
    let cd = ((alpha - beta) / 2.0).cos();
    let sum = alpha + beta;

    let gamma_a = 0.5 * (-2.0 * (s.asin() / t).sin() + cd).acos() - sum / 4.0;
    let gamma_b = -0.5 * (-2.0 * (t * s.asin()).sin() + cd).acos() + sum / 4.0;
    let gamma_c = -(-2.0 * (2.0 * t * ((-s).acos() - 2.0 * PI) / (1.0 + t)).sin() + cd).acos() + sum / 2.0;

    let a_valid = gamma_a.is_finite()
        && gamma_a >= 0.0
        && (concentric_iou(alpha, beta, gamma_a) - t).abs() <= RADIUS_CHECK_TOL;
    let b_valid = gamma_b.is_finite()
        && gamma_b >= 0.0
        && (concentric_iou(alpha, beta, -gamma_b) - t).abs() <= RADIUS_CHECK_TOL;
    let c_valid = gamma_c.is_finite() && gamma_c >= 0.0;

    let best = [(gamma_a, a_valid), (gamma_b, b_valid), (gamma_c, c_valid)]
        .iter()
        .filter(|(_, ok)| *ok)
        .map(|(g, _)| *g)
        .fold(f64::INFINITY, f64::min);
    let (gamma, used_fallback) = if best.is_finite() {
        (best.max(0.0), false)
    } else {
        (bisect_inflation(alpha, beta, t), true)
    };
    RadiusBreakdown {
        gamma_a,
        gamma_b,
        gamma_c,
        a_valid,
        b_valid,
        c_valid,
        gamma,
        used_fallback,
    }
}

/// Largest `γ` with `concentric_iou(α, β, γ) ≥ t`, searched while the
/// inflated box stays a valid rect.
pub fn bisect_inflation(alpha: f64, beta: f64, t: f64) -> f64 {
    if t >= 1.0 {
        return 0.0;
    }
    let hi_max = (PI - alpha.max(beta)) / 2.0;
    if concentric_iou(alpha, beta, hi_max) >= t {
        return hi_max;
    }
    let (mut lo, mut hi) = (0.0, hi_max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if concentric_iou(alpha, beta, mid) >= t {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 {
            break;
        }
    }
    lo
}

/// Heatmap value at `loc` for an object centered at `center` (both
/// `(θ, φ)`), with `d` the geodesic distance between them.
pub fn heatmap_value(center: (f64, f64), loc: (f64, f64), sigma: f64, mode: HeatmapMode) -> f64 {
    let d = sph_to_vec(center.0, center.1).angle_to(sph_to_vec(loc.0, loc.1));
    let e = match mode {
        HeatmapMode::AsPrinted => d,
        HeatmapMode::Squared => d * d,
    };
    (-e / (2.0 * sigma * sigma)).exp()
}

/// Options for [`render_gt`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub iou_threshold: f64,
    /// `σ = sigma_scale · γ`.
    pub sigma_scale: f64,
    pub mode: HeatmapMode,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            iou_threshold: 0.7,
            sigma_scale: 1.0 / 3.0,
            mode: HeatmapMode::AsPrinted,
        }
    }
}

/// Ground-truth tensor for a set of annotations.
///
/// Each object writes score 1 at its center cell plus the splat value at
/// every cell (location `(x·2π/W, y·π/H)`) within geodesic distance `γ` of
/// the true center. Overlapping splats keep the larger value. Offsets and
/// fovs are written at center cells only.
pub fn render_gt(
    annotations: &[GtAnnotation],
    spec: ErpImageSpec,
    num_classes: usize,
    opts: RenderOptions,
) -> Result<HeatmapTensor, DetectorError> {
    let mut t = HeatmapTensor::zeros(spec, num_classes, opts.mode);
    let (w, h) = (spec.width, spec.height);
    let cells: Vec<_> = (0..w)
        .map(|x| x as f64 * spec.theta_step())
        .collect();
    for a in annotations {
        if a.class_id >= num_classes {
            return Err(DetectorError::InvalidClass {
                class_id: a.class_id,
                num_classes,
            });
        }
        let (theta, phi) = (a.bbox.theta(), a.bbox.phi());
        let gamma = radius(a.bbox.alpha(), a.bbox.beta(), opts.iou_threshold).gamma;
        let sigma = opts.sigma_scale * gamma;
        let center = sph_to_vec(theta, phi);
        if gamma > 0.0 && sigma > 0.0 {
            let y0 = ((phi - gamma) / spec.phi_step()).floor().max(0.0) as usize;
            let y1 = (((phi + gamma) / spec.phi_step()).ceil() as usize).min(h - 1);
            let plane = t.class_plane_mut(a.class_id);
            for y in y0..=y1 {
                let cell_phi = y as f64 * spec.phi_step();
                for (x, &cell_theta) in cells.iter().enumerate() {
                    if center.angle_to(sph_to_vec(cell_theta, cell_phi)) <= gamma {
                        let v = heatmap_value((theta, phi), (cell_theta, cell_phi), sigma, opts.mode);
                        let slot = &mut plane[y * w + x];
                        *slot = slot.max(v);
                    }
                }
            }
        }
        let ((x, y), off) = gt_offset(theta, phi, spec);
        t.set_score(a.class_id, x, y, 1.0);
        t.set_offset(x, y, off);
        t.set_fov(x, y, (a.bbox.alpha(), a.bbox.beta()));
    }
    Ok(t)
}
