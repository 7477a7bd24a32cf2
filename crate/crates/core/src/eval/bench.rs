use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use super::EvalError;
use crate::criteria::{CriterionId, ErpImageSpec};
use crate::geometry::SphericalRect;

pub const MIN_BENCH_PAIRS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub criterion: CriterionId,
    pub label: String,
    /// Grid the criterion ran on.
    pub grid: ErpImageSpec,
    pub median_ms: f64,
    pub calls: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub n_pairs: usize,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// Median integral time over median analytical time, on the largest
    /// grid the integral ran at.
    pub fn integral_speedup(&self) -> Option<f64> {
        let ours = self.rows.iter().find(|r| r.criterion == CriterionId::UnbiasedSpherical)?;
        let integral = self
            .rows
            .iter()
            .filter(|r| matches!(r.criterion, CriterionId::PixelIntegral(_)))
            .max_by_key(|r| r.grid.pixel_count())?;
        Some(integral.median_ms / ours.median_ms)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} pairs, median wall time per IoU", self.n_pairs);
        let _ = writeln!(s, "{:<14} {:<24} {:>12}", "label", "criterion", "median ms");
        for r in &self.rows {
            let _ = writeln!(s, "{:<14} {:<24} {:>12.6}", r.label, r.criterion.to_string(), r.median_ms);
        }
        if let Some(x) = self.integral_speedup() {
            let _ = writeln!(s, "analytical speedup over integral: {x:.1}x");
        }
        s
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Times one IoU call per pair for each criterion. The integral oracle runs
/// once per entry of `resolutions`, with each as its grid; other criteria
/// run on the first resolution. Failed calls are timed all the same.
pub fn bench(
    criteria: &[CriterionId],
    pairs: &[(SphericalRect, SphericalRect)],
    resolutions: &[ErpImageSpec],
) -> Result<BenchReport, EvalError> {
    if pairs.len() < MIN_BENCH_PAIRS {
        return Err(EvalError::TooFewPairs(pairs.len()));
    }
    if criteria.is_empty() {
        return Err(EvalError::EmptyInput("criteria"));
    }
    let grids: Vec<ErpImageSpec> = if resolutions.is_empty() {
        vec![ErpImageSpec::default()]
    } else {
        resolutions.to_vec()
    };
    let mut runs = Vec::new();
    for &id in criteria {
        match id {
            CriterionId::PixelIntegral(_) => runs.extend(grids.iter().map(|&g| (CriterionId::PixelIntegral(g), g))),
            other => runs.push((other, grids[0])),
        }
    }
    let rows = runs
        .into_iter()
        .map(|(id, grid)| {
            let times = pairs
                .iter()
                .map(|(b1, b2)| {
                    let t0 = Instant::now();
                    let v = id.evaluate(b1, b2, grid);
                    let dt = t0.elapsed().as_secs_f64() * 1e3;
                    std::hint::black_box(v.ok());
                    dt
                })
                .collect();
            BenchRow {
                criterion: id,
                label: id.label().to_string(),
                grid,
                median_ms: median(times),
                calls: pairs.len(),
            }
        })
        .collect();
    Ok(BenchReport {
        n_pairs: pairs.len(),
        rows,
    })
}
