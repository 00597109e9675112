// Copyright 2026 MSQPT Contributors
// SPDX-License-Identifier: Apache-2.0

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance for Born probabilities that drift just outside `[0, 1]`.
const PROB_SLACK: f64 = 1e-9;

/// Outcome counts of repeated single-qubit Z readouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShotRecord {
    pub shots: u64,
    pub count0: u64,
    pub count1: u64,
    pub seed: u64,
}

impl ShotRecord {
    /// `(count0 - count1) / shots`, an unbiased estimate of `2 p0 - 1`.
    pub fn z_estimate(&self) -> f64 {
        (self.count0 as f64 - self.count1 as f64) / self.shots as f64
    }

    pub fn p0(&self) -> f64 {
        self.count0 as f64 / self.shots as f64
    }
}

/// Binomial draw of `shots` readouts with `P(0) = p0`.
pub fn sample(p0: f64, shots: u64, seed: u64) -> Result<ShotRecord> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    if !(-PROB_SLACK..=1.0 + PROB_SLACK).contains(&p0) || p0.is_nan() {
        return Err(Error::InvalidProbability(p0));
    }
    let p0 = p0.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count0 = Binomial::new(shots, p0).map_err(|_| Error::InvalidProbability(p0))?.sample(&mut rng);
    Ok(ShotRecord { shots, count0, count1: shots - count0, seed })
}

/// Per-setting RNG seed derived from the run seed and the `(i, k)` pair.
pub fn stream_seed(seed: u64, i: usize, k: usize) -> u64 {
    let tag = ((i as u64) << 32) ^ (k as u64);
    splitmix64(seed ^ splitmix64(tag.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certain_outcomes() {
        for seed in [0, 1, 99] {
            let r = sample(1.0, 4096, seed).unwrap();
            assert_eq!((r.count0, r.count1), (4096, 0));
        }
        let r = sample(0.0, 10, 5).unwrap();
        assert_eq!(r.count1, 10);
    }

    #[test]
    fn fair_coin_is_reproducible_and_concentrated() {
        let a = sample(0.5, 4096, 7).unwrap();
        let b = sample(0.5, 4096, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.count0 + a.count1, 4096);
        assert!((a.p0() - 0.5).abs() < 5.0 * (0.25f64 / 4096.0).sqrt());
    }

    #[test]
    fn estimator_is_unbiased() {
        let p0 = 0.3;
        let trials = 2000;
        let mean: f64 = (0..trials).map(|s| sample(p0, 256, s).unwrap().z_estimate()).sum::<f64>() / trials as f64;
        // standard error of the mean ~ sqrt(4 * 0.21 / 256 / 2000)
        assert!((mean - (2.0 * p0 - 1.0)).abs() < 5.0 * (4.0 * 0.21 / 256.0 / trials as f64).sqrt());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(sample(0.5, 0, 1), Err(Error::ZeroShots)));
        assert!(matches!(sample(1.2, 10, 1), Err(Error::InvalidProbability(_))));
        assert!(sample(1.0 + 1e-12, 10, 1).is_ok());
    }

    #[test]
    fn stream_seeds_differ() {
        let a = stream_seed(7, 1, 2);
        assert_eq!(a, stream_seed(7, 1, 2));
        assert_ne!(a, stream_seed(7, 2, 1));
        assert_ne!(a, stream_seed(8, 1, 2));
    }
}
