//! TTUCB: Top Two with a UCB leader and a transportation-cost challenger on
//! full-history statistics, stopped by a GLR test with a phase-free threshold.

use super::selection::{select_challenger, select_ucb_leader};
use super::tracking::TrackingState;
use super::{Outcome, RoundInfo, RunConfig, RunObserver, REWARD_STREAM};
use crate::bandit::{draw_bernoulli, BanditInstance, RngStream};
use crate::threshold::{GlrStopper, StoppingRule, ThresholdParams};
use crate::Result;

pub(crate) fn run(
    instance: &BanditInstance,
    config: &RunConfig,
    rng: &RngStream,
    observer: &mut dyn RunObserver,
) -> Result<Outcome> {
    let mu = instance.means();
    let arms = mu.len();
    let mut rewards = rng.fork(REWARD_STREAM);
    let mut sums = vec![0.0; arms];
    let mut counts = vec![1u64; arms];
    for a in 0..arms {
        observer.on_pull(a as u64 + 1, a);
        sums[a] = draw_bernoulli(mu[a], &mut rewards);
    }
    // a single phase per arm: the threshold reduces to c_1(n, m, δ)
    let ones = vec![1u32; arms];
    let mut stopper = GlrStopper::new(ThresholdParams::new(config.s, arms)?, config.delta, StoppingRule::NonPrivate)?;
    let mut tracking = TrackingState::new(arms);
    let mut means: Vec<f64> = sums.clone();

    let mut n = arms as u64 + 1;
    loop {
        let pulls = n - 1;
        let decision = stopper.check(&means, &counts, &ones)?;
        if decision.stop || pulls >= config.cap {
            observer.on_finish(None);
            return Ok(Outcome {
                pulls,
                recommendation: decision.candidate,
                counts,
                capped: !decision.stop,
            });
        }

        let leader = select_ucb_leader(&means, &counts, n)?;
        let challenger = select_challenger(&means, &counts, leader)?;
        let pulled = tracking.begin_round(leader, challenger, config.beta);
        let reward = draw_bernoulli(mu[pulled], &mut rewards);
        tracking.finish_round(leader, pulled);
        debug_assert!({
            let d = tracking.deviation(leader, config.beta);
            (-0.5..=1.0).contains(&d)
        });
        sums[pulled] += reward;
        counts[pulled] += 1;
        means[pulled] = sums[pulled] / counts[pulled] as f64;
        observer.on_pull(n, pulled);
        let info = RoundInfo {
            time: n,
            leader,
            challenger,
            pulled,
            reward,
        };
        observer.on_round(&info, &tracking, None);
        n += 1;
    }
}
