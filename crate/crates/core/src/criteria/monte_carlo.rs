//! Monte Carlo IoU oracle.
//!
//! Points are drawn uniformly on the sphere as `z ~ U[−1, 1]`,
//! `θ ~ U[0, 2π)`. Samples are split into fixed chunks of 2¹⁶; chunk `k`
//! uses `ChaCha8Rng::seed_from_u64(seed)` on stream `k`, so the counts do
//! not depend on thread scheduling.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CriterionError;
use crate::geometry::{BoundaryPlanes, SphericalRect, UnitVec3};

pub const MIN_SAMPLES: u64 = 1000;
const CHUNK: u64 = 1 << 16;

/// Raw hit counts of one Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct McCounts {
    pub n_samples: u64,
    pub n_first: u64,
    pub n_second: u64,
    pub n_both: u64,
}

impl McCounts {
    pub fn n_either(&self) -> u64 {
        self.n_first + self.n_second - self.n_both
    }

    /// Fraction of the sphere covered by the first box, times 4π.
    pub fn first_area(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.n_first as f64 / self.n_samples as f64
    }
}

/// IoU estimate with its binomial standard error `√(J(1−J)/m)`, where `m`
/// is the number of samples in the union.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub counts: McCounts,
}

fn uniform_point(rng: &mut ChaCha8Rng) -> UnitVec3 {
    let z: f64 = 2.0 * rng.gen::<f64>() - 1.0;
    let theta = TAU * rng.gen::<f64>();
    let r = (1.0 - z * z).max(0.0).sqrt();
    let (s, c) = theta.sin_cos();
    UnitVec3::new_unchecked(r * c, r * s, z)
}

fn count_chunk(p1: &BoundaryPlanes, p2: &BoundaryPlanes, seed: u64, chunk: u64, n: u64) -> McCounts {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut c = McCounts {
        n_samples: n,
        ..McCounts::default()
    };
    for _ in 0..n {
        let p = uniform_point(&mut rng);
        let i1 = p1.contains(p);
        let i2 = p2.contains(p);
        c.n_first += i1 as u64;
        c.n_second += i2 as u64;
        c.n_both += (i1 && i2) as u64;
    }
    c
}

/// Hit counts for both boxes over `n_samples` shared sample points.
pub fn monte_carlo_counts(b1: &SphericalRect, b2: &SphericalRect, n_samples: u64, seed: u64) -> McCounts {
    let p1 = b1.boundary();
    let p2 = b2.boundary();
    let chunks = n_samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let n = CHUNK.min(n_samples - k * CHUNK);
            count_chunk(&p1, &p2, seed, k, n)
        })
        .reduce(McCounts::default, |a, b| McCounts {
            n_samples: a.n_samples + b.n_samples,
            n_first: a.n_first + b.n_first,
            n_second: a.n_second + b.n_second,
            n_both: a.n_both + b.n_both,
        })
}

pub fn iou_monte_carlo(
    b1: &SphericalRect,
    b2: &SphericalRect,
    n_samples: u64,
    seed: u64,
) -> Result<McEstimate, CriterionError> {
    if n_samples < MIN_SAMPLES {
        return Err(CriterionError::TooFewSamples(n_samples));
    }
    let counts = monte_carlo_counts(b1, b2, n_samples, seed);
    let m = counts.n_either();
    if m == 0 {
        return Err(CriterionError::ZeroUnion);
    }
    let j = counts.n_both as f64 / m as f64;
    Ok(McEstimate {
        estimate: j,
        std_error: (j * (1.0 - j) / m as f64).sqrt(),
        counts,
    })
}
