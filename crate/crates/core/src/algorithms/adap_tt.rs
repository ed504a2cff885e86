//! AdaP-TT and its non-private counterpart.
//!
//! Both share the episode machinery; they differ in how episode means are
//! released, in the leader bonus and in the stopping threshold.

use super::phase::{PhaseState, Release};
use super::selection::{select_challenger, select_nonprivate_leader, select_private_leader};
use super::tracking::TrackingState;
use super::{Outcome, RoundInfo, RunConfig, RunObserver, NOISE_STREAM, REWARD_STREAM};
use crate::bandit::{draw_bernoulli, BanditInstance, RngStream};
use crate::threshold::{argmax, GlrStopper, StoppingRule, ThresholdParams};
use crate::Result;

pub(crate) fn run_phased(
    instance: &BanditInstance,
    config: &RunConfig,
    release: Release,
    rng: &RngStream,
    observer: &mut dyn RunObserver,
) -> Result<Outcome> {
    let mu = instance.means();
    let arms = mu.len();
    let mut rewards = rng.fork(REWARD_STREAM);
    let mut noise = rng.fork(NOISE_STREAM);

    let init: Vec<f64> = (0..arms)
        .map(|a| {
            observer.on_pull(a as u64 + 1, a);
            draw_bernoulli(mu[a], &mut rewards)
        })
        .collect();
    let mut state = PhaseState::initialize(&init, release, &mut noise)?;
    let rule = match release {
        Release::Laplace { epsilon, .. } => StoppingRule::Private { epsilon },
        Release::Raw => StoppingRule::NonPrivate,
    };
    let mut stopper = GlrStopper::new(ThresholdParams::new(config.s, arms)?, config.delta, rule)?;
    let mut tracking = TrackingState::new(arms);

    // the GLR statistics only move when some arm switches phase
    let mut decision = stopper.check(state.means(), state.local_counts(), state.phases())?;
    let select_leader = |state: &PhaseState| match release {
        Release::Laplace { epsilon, .. } => select_private_leader(state, epsilon),
        Release::Raw => select_nonprivate_leader(state),
    };
    // so does the leader: its index reads phase statistics only
    let mut leader = select_leader(&state)?;
    let mut n = arms as u64 + 1;
    loop {
        let pulls = n - 1;
        if decision.stop || pulls >= config.cap {
            observer.on_finish(Some(&state));
            let capped = !decision.stop;
            let recommendation = if capped { argmax(state.means()) } else { decision.candidate };
            return Ok(Outcome {
                pulls,
                recommendation,
                counts: state.global_counts().to_vec(),
                capped,
            });
        }

        let challenger = select_challenger(state.means(), state.global_counts(), leader)?;
        let pulled = tracking.begin_round(leader, challenger, config.beta);
        let reward = draw_bernoulli(mu[pulled], &mut rewards);
        tracking.finish_round(leader, pulled);
        debug_assert!({
            let d = tracking.deviation(leader, config.beta);
            (-0.5..=1.0).contains(&d)
        });
        observer.on_pull(n, pulled);
        let info = RoundInfo {
            time: n,
            leader,
            challenger,
            pulled,
            reward,
        };
        observer.on_round(&info, &tracking, Some(&state));

        if let Some(switch) = state.record(pulled, reward, n, &mut noise)? {
            observer.on_phase_switch(&switch);
            decision = stopper.check(state.means(), state.local_counts(), state.phases())?;
            leader = select_leader(&state)?;
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::super::{run, run_observed, Algorithm, PhaseSwitch};
    use super::*;

    const MU1: [f64; 5] = [0.95, 0.9, 0.9, 0.9, 0.5];

    fn inst(m: &[f64]) -> BanditInstance {
        BanditInstance::new(m.to_vec()).unwrap()
    }

    #[test]
    fn deterministic_under_seed() {
        let cfg = RunConfig { epsilon: 1.0, ..Default::default() };
        let rng = RngStream::new(42, 0);
        let a = run(Algorithm::AdapTt, &inst(&MU1), &cfg, &rng).unwrap();
        let b = run(Algorithm::AdapTt, &inst(&MU1), &cfg, &rng).unwrap();
        assert_eq!(a.stopping_time, b.stopping_time);
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.recommended_arm, b.recommended_arm);
    }

    #[test]
    fn degenerate_rewards_stop_correctly() {
        let cfg = RunConfig { epsilon: 10.0, delta: 0.1, cap: 10_000_000, ..Default::default() };
        for seed in 0..20 {
            let r = run(Algorithm::AdapTt, &inst(&[1.0, 0.0]), &cfg, &RngStream::new(seed, 0)).unwrap();
            assert!(!r.capped);
            assert_eq!(r.recommended_arm, 0);
            assert!(r.stopping_time >= 2);
            assert_eq!(r.counts.iter().sum::<u64>(), r.stopping_time);
        }
    }

    #[test]
    fn cap_is_reported() {
        let cfg = RunConfig { cap: 50, ..Default::default() };
        let r = run(Algorithm::AdapTt, &inst(&MU1), &cfg, &RngStream::new(1, 0)).unwrap();
        assert!(r.capped);
        assert_eq!(r.stopping_time, 50);
    }

    #[derive(Default)]
    struct Audit {
        switches: Vec<PhaseSwitch>,
        rounds: u64,
        pulls: Vec<u64>,
    }

    impl RunObserver for Audit {
        fn on_pull(&mut self, time: u64, _arm: usize) {
            self.pulls.push(time);
        }
        fn on_round(&mut self, _: &RoundInfo, t: &TrackingState, _: Option<&PhaseState>) {
            self.rounds += 1;
            assert_eq!(t.total_leaderships(), self.rounds);
        }
        fn on_phase_switch(&mut self, s: &PhaseSwitch) {
            self.switches.push(s.clone());
        }
    }

    #[test]
    fn doubling_counts_during_a_run() {
        let cfg = RunConfig { epsilon: 0.5, delta: 0.05, ..Default::default() };
        let mut audit = Audit::default();
        let r = run_observed(Algorithm::AdapTt, &inst(&MU1), &cfg, &RngStream::new(5, 0), &mut audit).unwrap();
        assert!(!audit.switches.is_empty());
        for s in &audit.switches {
            assert_eq!(s.global_count, 1 << (s.phase - 1));
            assert_eq!(s.local_count, 1 << (s.phase - 2));
        }
        let times: Vec<u64> = (1..=r.stopping_time).collect();
        assert_eq!(audit.pulls, times);
    }
}
