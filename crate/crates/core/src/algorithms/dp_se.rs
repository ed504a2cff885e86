//! DP-SE: private successive elimination over doubling epochs.
//!
//! Epoch `t` samples every active arm `R_t = 2^t` times, releases the epoch
//! means with `Lap(1/(ε R_t))` noise and eliminates every arm whose upper
//! confidence bound falls below the largest lower confidence bound. Each
//! epoch uses fresh samples only.

use super::{Outcome, RunConfig, RunObserver, NOISE_STREAM, REWARD_STREAM};
use crate::bandit::{draw_bernoulli, BanditInstance, RngStream};
use crate::privacy::sample_laplace;
use crate::Result;

/// Confidence half-width after an epoch of `r` samples per arm.
pub(crate) fn confidence_width(arms: usize, epoch: u32, r: u64, delta: f64, epsilon: f64) -> f64 {
    let t = epoch as f64;
    let log_term = (8.0 * arms as f64 * t * t / delta).ln();
    let r = r as f64;
    (log_term / (2.0 * r)).sqrt() + log_term / (epsilon * r)
}

pub(crate) fn run(
    instance: &BanditInstance,
    config: &RunConfig,
    rng: &RngStream,
    observer: &mut dyn RunObserver,
) -> Result<Outcome> {
    let mu = instance.means();
    let arms = mu.len();
    let mut rewards = rng.fork(REWARD_STREAM);
    let mut noise = rng.fork(NOISE_STREAM);
    let mut active: Vec<usize> = (0..arms).collect();
    let mut counts = vec![0u64; arms];
    let mut private_means = vec![f64::NEG_INFINITY; arms];
    let mut pulls = 0u64;
    let mut epoch = 1u32;

    while active.len() > 1 {
        let r = 1u64.checked_shl(epoch).filter(|r| *r < u64::MAX / arms as u64);
        let budget_left = config.cap - pulls;
        let r = match r {
            Some(r) if r * active.len() as u64 <= budget_left => r,
            _ => {
                observer.on_finish(None);
                let recommendation = *active
                    .iter()
                    .max_by(|&&a, &&b| private_means[a].total_cmp(&private_means[b]).then(b.cmp(&a)))
                    .expect("active set is non-empty");
                return Ok(Outcome {
                    pulls,
                    recommendation,
                    counts,
                    capped: true,
                });
            }
        };

        for &a in &active {
            let mut sum = 0.0;
            for _ in 0..r {
                pulls += 1;
                observer.on_pull(pulls, a);
                sum += draw_bernoulli(mu[a], &mut rewards);
            }
            counts[a] += r;
            private_means[a] = sum / r as f64 + sample_laplace(1.0 / (config.epsilon * r as f64), &mut noise)?;
        }

        let width = confidence_width(arms, epoch, r, config.delta, config.epsilon);
        let best_lcb = active
            .iter()
            .map(|&a| private_means[a] - width)
            .fold(f64::NEG_INFINITY, f64::max);
        active.retain(|&a| private_means[a] + width >= best_lcb);
        epoch += 1;
    }

    observer.on_finish(None);
    Ok(Outcome {
        pulls,
        recommendation: active[0],
        counts,
        capped: false,
    })
}
