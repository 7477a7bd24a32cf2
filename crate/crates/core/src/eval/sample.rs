use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::SphericalRect;

/// Closed range both fovs are drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FovRange {
    pub min: f64,
    pub max: f64,
}

impl Default for FovRange {
    fn default() -> Self {
        FovRange { min: 0.05, max: 2.8 }
    }
}

/// Center uniform on the sphere, fovs uniform in `fov`.
pub fn random_rect<R: Rng + ?Sized>(rng: &mut R, fov: FovRange) -> SphericalRect {
    let theta = rng.gen_range(0.0..TAU);
    let phi = rng.gen_range(-1.0f64..=1.0).acos().clamp(0.0, PI);
    let alpha = rng.gen_range(fov.min..=fov.max);
    let beta = rng.gen_range(fov.min..=fov.max);
    SphericalRect::new(theta, phi, alpha, beta).expect("sampled parameters are in range")
}

pub fn random_pair<R: Rng + ?Sized>(rng: &mut R, fov: FovRange) -> (SphericalRect, SphericalRect) {
    (random_rect(rng, fov), random_rect(rng, fov))
}

/// `n` independent pairs, reproducible from `seed`.
pub fn random_pairs(n: usize, seed: u64, fov: FovRange) -> Vec<(SphericalRect, SphericalRect)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_pair(&mut rng, fov)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_in_range() {
        let a = random_pairs(200, 3, FovRange::default());
        assert_eq!(a, random_pairs(200, 3, FovRange::default()));
        for (b1, b2) in &a {
            for b in [b1, b2] {
                assert!((0.05..=2.8).contains(&b.alpha()) && (0.05..=2.8).contains(&b.beta()));
            }
        }
        // cos φ uniform: about half the centers in the northern hemisphere
        let north = a.iter().filter(|p| p.0.phi() < PI / 2.0).count();
        assert!((70..=130).contains(&north), "{north}");
    }
}
