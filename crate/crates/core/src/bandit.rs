//! Bernoulli bandit instances, gap vectors and seeded reward streams.
//!
//! Arms are 0-indexed everywhere. Every instance used by a run must have a
//! unique best arm.

use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// K Bernoulli arms described by their means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditInstance {
    means: Vec<f64>,
}

impl BanditInstance {
    /// Builds an instance, rejecting fewer than two arms or means outside `[0, 1]`.
    ///
    /// A tied maximum is allowed here; [`best_arm`] and every run reject it.
    pub fn new(means: Vec<f64>) -> Result<Self> {
        if means.len() < 2 {
            return Err(Error::domain(format!(
                "an instance needs at least 2 arms, got {}",
                means.len()
            )));
        }
        if let Some((a, m)) = means
            .iter()
            .enumerate()
            .find(|(_, m)| !(0.0..=1.0).contains(*m))
        {
            return Err(Error::domain(format!("mean of arm {a} is {m}, outside [0, 1]")));
        }
        Ok(Self { means })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn arms(&self) -> usize {
        self.means.len()
    }

    pub fn mean(&self, arm: usize) -> Result<f64> {
        self.means.get(arm).copied().ok_or(Error::IndexOutOfRange {
            index: arm,
            arms: self.arms(),
        })
    }
}

/// Gaps to the best arm. The best arm carries a zero gap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapVector {
    pub best: usize,
    pub gaps: Vec<f64>,
    pub min_gap: f64,
    pub max_gap: f64,
}

impl GapVector {
    pub fn arms(&self) -> usize {
        self.gaps.len()
    }

    /// Iterates over `(arm, gap)` for the suboptimal arms.
    pub fn suboptimal(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let best = self.best;
        self.gaps
            .iter()
            .copied()
            .enumerate()
            .filter(move |&(a, _)| a != best)
    }
}

/// Index of the unique arm with the largest mean.
pub fn best_arm(instance: &BanditInstance) -> Result<usize> {
    let means = instance.means();
    let mut best = 0;
    for (a, &m) in means.iter().enumerate().skip(1) {
        if m > means[best] {
            best = a;
        }
    }
    if let Some(other) = means
        .iter()
        .enumerate()
        .position(|(a, &m)| a != best && m == means[best])
    {
        let (lo, hi) = if other < best { (other, best) } else { (best, other) };
        return Err(Error::TiedBestArm(lo, hi));
    }
    Ok(best)
}

pub fn gaps(instance: &BanditInstance) -> Result<GapVector> {
    let best = best_arm(instance)?;
    let top = instance.means()[best];
    let gaps: Vec<f64> = instance.means().iter().map(|m| top - m).collect();
    let (mut min_gap, mut max_gap) = (f64::INFINITY, 0.0_f64);
    for (a, &g) in gaps.iter().enumerate() {
        if a != best {
            min_gap = min_gap.min(g);
            max_gap = max_gap.max(g);
        }
    }
    Ok(GapVector {
        best,
        gaps,
        min_gap,
        max_gap,
    })
}

/// A deterministic random stream keyed by `(seed, stream)`.
///
/// Backed by ChaCha8 with the stream id mapped onto ChaCha's native stream
/// parameter, so streams sharing a seed never overlap.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Derives an independent child stream. Used to keep reward draws and
    /// privacy noise on separate sequences within one run.
    pub fn fork(&self, label: u64) -> RngStream {
        RngStream::new(splitmix64(self.seed ^ splitmix64(label)), self.stream)
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform draw in the open interval `(0, 1)`.
    pub fn uniform_open(&mut self) -> f64 {
        Open01.sample(&mut self.rng)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Bernoulli reward for `arm`, in `{0, 1}`.
pub fn sample_reward(instance: &BanditInstance, arm: usize, rng: &mut RngStream) -> Result<f64> {
    let mean = instance.mean(arm)?;
    Ok(draw_bernoulli(mean, rng))
}

#[inline]
pub(crate) fn draw_bernoulli(mean: f64, rng: &mut RngStream) -> f64 {
    if rng.uniform() < mean {
        1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(m: &[f64]) -> BanditInstance {
        BanditInstance::new(m.to_vec()).unwrap()
    }

    #[test]
    fn best_arm_examples() {
        assert_eq!(best_arm(&inst(&[0.95, 0.9, 0.9, 0.9, 0.5])).unwrap(), 0);
        assert_eq!(best_arm(&inst(&[0.2, 0.8])).unwrap(), 1);
        assert!(matches!(
            best_arm(&inst(&[0.5, 0.5])),
            Err(Error::TiedBestArm(0, 1))
        ));
    }

    #[test]
    fn gap_examples() {
        let g = gaps(&inst(&[0.95, 0.9, 0.9, 0.9, 0.5])).unwrap();
        let want = [0.0, 0.05, 0.05, 0.05, 0.45];
        for (got, want) in g.gaps.iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((g.min_gap - 0.05).abs() < 1e-12);
        assert!((g.max_gap - 0.45).abs() < 1e-12);

        let g = gaps(&inst(&[0.75, 0.7, 0.7, 0.7, 0.7])).unwrap();
        assert!((g.min_gap - 0.05).abs() < 1e-12);
        assert!((g.max_gap - 0.05).abs() < 1e-12);

        let g = gaps(&inst(&[1.0, 0.0])).unwrap();
        assert_eq!(g.gaps, vec![0.0, 1.0]);
    }

    #[test]
    fn tie_propagates_through_gaps() {
        assert!(matches!(
            gaps(&inst(&[0.3, 0.7, 0.7])),
            Err(Error::TiedBestArm(1, 2))
        ));
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(BanditInstance::new(vec![0.5]).is_err());
        assert!(BanditInstance::new(vec![0.5, 1.2]).is_err());
        assert!(BanditInstance::new(vec![-0.1, 0.5]).is_err());
    }

    #[test]
    fn degenerate_rewards() {
        let i = inst(&[1.0, 0.0]);
        let mut rng = RngStream::new(3, 0);
        for _ in 0..1000 {
            assert_eq!(sample_reward(&i, 0, &mut rng).unwrap(), 1.0);
            assert_eq!(sample_reward(&i, 1, &mut rng).unwrap(), 0.0);
        }
        assert!(matches!(
            sample_reward(&i, 2, &mut rng),
            Err(Error::IndexOutOfRange { index: 2, arms: 2 })
        ));
    }

    #[test]
    fn empirical_mean_within_three_sigma() {
        let n = 100_000;
        for (s, mu) in [0.1, 0.5, 0.9].into_iter().enumerate() {
            let i = inst(&[mu, 0.0]);
            let mut rng = RngStream::new(11, s as u64);
            let total: f64 = (0..n).map(|_| sample_reward(&i, 0, &mut rng).unwrap()).sum();
            let mean = total / n as f64;
            let sigma = (mu * (1.0 - mu) / n as f64).sqrt();
            assert!((mean - mu).abs() <= 3.0 * sigma, "mu={mu} mean={mean}");
            if mu == 0.5 {
                assert!((mean - 0.5).abs() < 0.01);
            }
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let draw = |seed, stream| {
            let mut r = RngStream::new(seed, stream);
            (0..64).map(|_| r.uniform()).collect::<Vec<_>>()
        };
        assert_eq!(draw(42, 7), draw(42, 7));
        assert_ne!(draw(42, 7), draw(42, 8));
        assert_ne!(draw(42, 7), draw(43, 7));

        let base = RngStream::new(42, 7);
        let mut a = base.fork(1);
        let mut b = base.fork(1);
        let mut c = base.fork(2);
        let (x, y, z) = (a.uniform(), b.uniform(), c.uniform());
        assert_eq!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn independent_streams_are_uncorrelated() {
        let n = 50_000;
        let mut a = RngStream::new(5, 0);
        let mut b = RngStream::new(5, 1);
        let (xs, ys): (Vec<f64>, Vec<f64>) = (0..n).map(|_| (a.uniform(), b.uniform())).unzip();
        let mx = xs.iter().sum::<f64>() / n as f64;
        let my = ys.iter().sum::<f64>() / n as f64;
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / n as f64;
        let corr = cov / (1.0 / 12.0);
        // 4 standard errors of a sample correlation at n = 5e4
        assert!(corr.abs() < 4.0 / (n as f64).sqrt(), "corr={corr}");
    }
}
