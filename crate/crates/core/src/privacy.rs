//! Laplace mechanism and per-arm episode accumulators.
//!
//! Raw reward sums only ever live inside an [`EpisodeAccumulator`]. Private
//! strategies read an episode through [`privatize_episode_mean`], which adds
//! `Lap(1 / (ε Ñ))` noise; a mean of `Ñ` rewards in `[0, 1]` has L1
//! sensitivity `1 / Ñ`, so each released episode mean is ε-DP.

use std::ops::Range;

use crate::bandit::RngStream;
use crate::{Error, Result};

/// Centred Laplace distribution with scale `b` (variance `2 b^2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceNoise {
    scale: f64,
}

impl LaplaceNoise {
    pub fn new(scale: f64) -> Result<Self> {
        if scale > 0.0 && scale.is_finite() {
            Ok(Self { scale })
        } else {
            Err(Error::domain(format!("Laplace scale must be positive, got {scale}")))
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn variance(&self) -> f64 {
        2.0 * self.scale * self.scale
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        laplace_from_uniform(rng.uniform_open(), self.scale)
    }
}

/// Inverse CDF of `Lap(scale)` evaluated at `u` in `(0, 1)`.
#[inline]
pub fn laplace_from_uniform(u: f64, scale: f64) -> f64 {
    let centred = u - 0.5;
    -scale * centred.signum() * (1.0 - 2.0 * centred.abs()).ln()
}

pub fn sample_laplace(scale: f64, rng: &mut RngStream) -> Result<f64> {
    Ok(LaplaceNoise::new(scale)?.sample(rng))
}

/// L1 sensitivity of the mean of `n` rewards in `[0, 1]`.
pub fn episode_mean_sensitivity(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroCount);
    }
    Ok(1.0 / n as f64)
}

/// Rewards of one arm collected during one phase.
///
/// `window` is expressed in the arm's own pull indices (0-based), so the
/// windows of successive episodes of an arm tile its pull history.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeAccumulator {
    arm: usize,
    phase: u32,
    reward_sum: f64,
    local_count: u64,
    window_start: u64,
}

impl EpisodeAccumulator {
    pub fn new(arm: usize, phase: u32, window_start: u64) -> Self {
        Self {
            arm,
            phase,
            reward_sum: 0.0,
            local_count: 0,
            window_start,
        }
    }

    pub fn push(&mut self, reward: f64) {
        debug_assert!((0.0..=1.0).contains(&reward));
        self.reward_sum += reward;
        self.local_count += 1;
    }

    pub fn arm(&self) -> usize {
        self.arm
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn local_count(&self) -> u64 {
        self.local_count
    }

    pub fn window(&self) -> Range<u64> {
        self.window_start..self.window_start + self.local_count
    }

    /// Pre-noise episode mean. Only the non-private baseline and trace
    /// audits read this; private decision code goes through
    /// [`privatize_episode_mean`].
    pub fn raw_mean(&self) -> Result<f64> {
        if self.local_count == 0 {
            return Err(Error::EmptyEpisode);
        }
        Ok(self.reward_sum / self.local_count as f64)
    }
}

/// Episode mean plus `Lap(1 / (ε Ñ))` noise.
pub fn privatize_episode_mean(
    acc: &EpisodeAccumulator,
    epsilon: f64,
    rng: &mut RngStream,
) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let mean = acc.raw_mean()?;
    let scale = episode_mean_sensitivity(acc.local_count)? / epsilon;
    Ok(mean + sample_laplace(scale, rng)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn laplace_moments() {
        let mut rng = RngStream::new(1, 0);
        let xs: Vec<f64> = (0..100_000).map(|_| sample_laplace(1.0, &mut rng).unwrap()).collect();
        let (mean, var) = moments(&xs);
        assert!(mean.abs() < 0.02, "mean={mean}");
        assert!((var - 2.0).abs() < 0.05 * 2.0, "var={var}");
        assert_eq!(LaplaceNoise::new(1.0).unwrap().variance(), 2.0);
    }

    #[test]
    fn inverse_cdf_properties() {
        assert_eq!(laplace_from_uniform(0.5, 3.0), 0.0);
        for u in [0.01, 0.2, 0.49, 0.51, 0.7, 0.999] {
            let a = laplace_from_uniform(u, 1.5);
            let b = laplace_from_uniform(u, 3.0);
            assert!((b - 2.0 * a).abs() < 1e-12);
            assert!((laplace_from_uniform(1.0 - u, 1.5) + a).abs() < 1e-12);
        }
        // CDF check: P(X <= x) = 1 - exp(-x/b)/2 for x >= 0
        let x = laplace_from_uniform(0.9, 1.0);
        assert!((1.0 - 0.5 * (-x).exp() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn laplace_rejects_bad_scale() {
        let mut rng = RngStream::new(0, 0);
        assert!(sample_laplace(0.0, &mut rng).is_err());
        assert!(sample_laplace(-1.0, &mut rng).is_err());
        assert!(LaplaceNoise::new(f64::NAN).is_err());
    }

    fn filled(rewards: &[f64]) -> EpisodeAccumulator {
        let mut acc = EpisodeAccumulator::new(0, 3, 2);
        for &r in rewards {
            acc.push(r);
        }
        acc
    }

    #[test]
    fn huge_epsilon_returns_raw_mean() {
        let acc = filled(&[1.0, 0.0, 1.0, 1.0]);
        let mut rng = RngStream::new(9, 0);
        let mut close = 0;
        for _ in 0..10_000 {
            let m = privatize_episode_mean(&acc, 1e9, &mut rng).unwrap();
            if (m - 0.75).abs() < 1e-6 {
                close += 1;
            }
        }
        assert!(close as f64 >= 0.999 * 10_000.0);
    }

    #[test]
    fn noise_scale_is_inverse_eps_count() {
        // Ñ = 4, ε = 1 → scale 0.25: replay the same uniform through the inverse CDF
        let acc = filled(&[1.0, 0.0, 0.0, 1.0]);
        let mut rng = RngStream::new(4, 4);
        let mut probe = rng.clone();
        let got = privatize_episode_mean(&acc, 1.0, &mut rng).unwrap();
        let u = probe.uniform_open();
        assert_eq!(got, 0.5 + laplace_from_uniform(u, 0.25));
    }

    #[test]
    fn privatize_is_deterministic() {
        let acc = filled(&[1.0, 0.0, 1.0]);
        let a = privatize_episode_mean(&acc, 0.5, &mut RngStream::new(1, 2)).unwrap();
        let b = privatize_episode_mean(&acc, 0.5, &mut RngStream::new(1, 2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn privatize_errors() {
        let mut rng = RngStream::new(0, 0);
        let empty = EpisodeAccumulator::new(1, 2, 0);
        assert!(matches!(
            privatize_episode_mean(&empty, 1.0, &mut rng),
            Err(Error::EmptyEpisode)
        ));
        assert!(privatize_episode_mean(&filled(&[1.0]), 0.0, &mut rng).is_err());
    }

    #[test]
    fn sensitivity_examples() {
        assert_eq!(episode_mean_sensitivity(1).unwrap(), 1.0);
        assert_eq!(episode_mean_sensitivity(8).unwrap(), 0.125);
        assert!(matches!(episode_mean_sensitivity(0), Err(Error::ZeroCount)));
    }

    #[test]
    fn single_flip_moves_mean_by_sensitivity() {
        let base = [1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0];
        let m0 = filled(&base).raw_mean().unwrap();
        let sens = episode_mean_sensitivity(8).unwrap();
        for i in 0..base.len() {
            let mut flipped = base;
            flipped[i] = 1.0 - flipped[i];
            let m1 = filled(&flipped).raw_mean().unwrap();
            assert!(((m1 - m0).abs() - sens).abs() < 1e-15);
        }
    }

    #[test]
    fn calibrated_absolute_noise() {
        // Ñ |Y| ~ Exponential(ε) when Y ~ Lap(1/(ε Ñ))
        let eps = 0.7;
        let acc = filled(&[0.0; 8]);
        let mut rng = RngStream::new(21, 0);
        let n = 100_000;
        let total: f64 = (0..n)
            .map(|_| 8.0 * privatize_episode_mean(&acc, eps, &mut rng).unwrap().abs())
            .sum();
        let mean = total / n as f64;
        assert!((mean - 1.0 / eps).abs() < 0.05 / eps, "mean={mean}");
    }

    #[test]
    fn window_tracks_pull_indices() {
        let acc = filled(&[1.0, 1.0, 0.0]);
        assert_eq!(acc.window(), 2..5);
        assert_eq!(acc.phase(), 3);
        assert_eq!(acc.arm(), 0);
    }
}
