//! Per-arm adaptive episodes with doubling and forgetting.

use std::ops::Range;

use crate::bandit::RngStream;
use crate::privacy::{privatize_episode_mean, EpisodeAccumulator};
use crate::{Error, Result};

/// How a closed episode's mean is released to the decision rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Release {
    /// Episode mean plus `Lap(1/(ε Ñ))`, optionally clipped to `[0, 1]`.
    /// Clipping is post-processing and keeps the release ε-DP.
    Laplace { epsilon: f64, clip: bool },
    /// Raw episode mean (non-private baseline).
    Raw,
}

/// Emitted whenever an arm enters a new phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSwitch {
    pub arm: usize,
    /// New phase index `k ≥ 2`.
    pub phase: u32,
    /// Round `T_k(a)` at which the switch happened.
    pub time: u64,
    /// `N_{T_k(a), a}`.
    pub global_count: u64,
    /// `Ñ_{k, a}`, the size of the episode that just closed.
    pub local_count: u64,
    /// Arm-local pull indices covered by the closed episode.
    pub window: Range<u64>,
}

#[derive(Debug, Clone)]
struct ArmPhase {
    phase: u32,
    count_at_switch: u64,
    global_count: u64,
    local_count: u64,
    released_mean: f64,
    open: EpisodeAccumulator,
}

/// Phase bookkeeping for every arm.
///
/// Only released means leave this type; the open episodes' reward sums are
/// never exposed, so leader, challenger and stopping code built on top of it
/// only see post-processed statistics.
#[derive(Debug, Clone)]
pub struct PhaseState {
    arms: Vec<ArmPhase>,
    release: Release,
    // mirrors of the per-arm fields in slice form for the decision rules
    means: Vec<f64>,
    local_counts: Vec<u64>,
    global_counts: Vec<u64>,
    phases: Vec<u32>,
}

impl PhaseState {
    /// Builds the state from one initial reward per arm. Phase 1's episode is
    /// the initialisation pull itself (`Ñ_1 = 1`).
    pub fn initialize(
        init_rewards: &[f64],
        release: Release,
        noise: &mut RngStream,
    ) -> Result<Self> {
        if init_rewards.len() < 2 {
            return Err(Error::domain("need at least two arms"));
        }
        if let Release::Laplace { epsilon, .. } = release {
            if !(epsilon > 0.0) {
                return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
            }
        }
        let mut arms = Vec::with_capacity(init_rewards.len());
        for (a, &x) in init_rewards.iter().enumerate() {
            let mut first = EpisodeAccumulator::new(a, 1, 0);
            first.push(x);
            let released_mean = release_mean(&first, release, noise)?;
            arms.push(ArmPhase {
                phase: 1,
                count_at_switch: 1,
                global_count: 1,
                local_count: 1,
                released_mean,
                open: EpisodeAccumulator::new(a, 1, 1),
            });
        }
        let mut state = Self {
            means: vec![0.0; arms.len()],
            local_counts: vec![0; arms.len()],
            global_counts: vec![0; arms.len()],
            phases: vec![0; arms.len()],
            arms,
            release,
        };
        for a in 0..state.arms.len() {
            state.sync(a);
        }
        Ok(state)
    }

    fn sync(&mut self, a: usize) {
        let s = &self.arms[a];
        self.means[a] = s.released_mean;
        self.local_counts[a] = s.local_count;
        self.global_counts[a] = s.global_count;
        self.phases[a] = s.phase;
    }

    /// Records a reward for `arm` observed at round `time`, then applies the
    /// doubling rule. Returns the switch if the arm entered a new phase.
    pub fn record(
        &mut self,
        arm: usize,
        reward: f64,
        time: u64,
        noise: &mut RngStream,
    ) -> Result<Option<PhaseSwitch>> {
        let k = self.arms.len();
        let release = self.release;
        let s = self.arms.get_mut(arm).ok_or(Error::IndexOutOfRange { index: arm, arms: k })?;
        s.open.push(reward);
        s.global_count += 1;
        self.global_counts[arm] = s.global_count;
        if s.global_count < 2 * s.count_at_switch {
            return Ok(None);
        }

        // the new round `time + 1` sees the doubled count
        let closed = std::mem::replace(
            &mut s.open,
            EpisodeAccumulator::new(arm, s.phase + 1, s.global_count),
        );
        s.released_mean = release_mean(&closed, release, noise)?;
        s.phase += 1;
        s.local_count = s.global_count - s.count_at_switch;
        s.count_at_switch = s.global_count;
        debug_assert_eq!(s.local_count, closed.local_count());
        debug_assert_eq!(s.count_at_switch, 1u64 << (s.phase - 1));
        let switch = PhaseSwitch {
            arm,
            phase: s.phase,
            time: time + 1,
            global_count: s.global_count,
            local_count: s.local_count,
            window: closed.window(),
        };
        self.sync(arm);
        Ok(Some(switch))
    }

    pub fn arms(&self) -> usize {
        self.arms.len()
    }

    /// Released means `μ̃_{k_a, a}` (or raw episode means for [`Release::Raw`]).
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// Local counts `Ñ_{k_a, a}`.
    pub fn local_counts(&self) -> &[u64] {
        &self.local_counts
    }

    /// Global counts `N_{n, a}`, including the initialisation pull.
    pub fn global_counts(&self) -> &[u64] {
        &self.global_counts
    }

    /// Current phase indices `k_a`.
    pub fn phases(&self) -> &[u32] {
        &self.phases
    }

    pub fn release(&self) -> Release {
        self.release
    }

    /// Arm-local pull indices of the episode still being collected.
    pub fn open_window(&self, arm: usize) -> Range<u64> {
        self.arms[arm].open.window()
    }
}

fn release_mean(acc: &EpisodeAccumulator, release: Release, noise: &mut RngStream) -> Result<f64> {
    match release {
        Release::Laplace { epsilon, clip: false } => privatize_episode_mean(acc, epsilon, noise),
        Release::Laplace { epsilon, clip: true } => {
            privatize_episode_mean(acc, epsilon, noise).map(|m| m.clamp(0.0, 1.0))
        }
        Release::Raw => acc.raw_mean(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_schedule() {
        let mut noise = RngStream::new(0, 0);
        let mut st = PhaseState::initialize(&[1.0, 0.0], Release::Raw, &mut noise).unwrap();
        let mut switches = Vec::new();
        for t in 3..40u64 {
            if let Some(s) = st.record(0, 1.0, t, &mut noise).unwrap() {
                switches.push(s);
            }
        }
        let counts: Vec<u64> = switches.iter().map(|s| s.global_count).collect();
        assert_eq!(counts, vec![2, 4, 8, 16, 32]);
        for s in &switches {
            assert_eq!(s.global_count, 1 << (s.phase - 1));
            assert_eq!(s.local_count, 1 << (s.phase - 2));
            assert_eq!(s.window.end - s.window.start, s.local_count);
        }
        // windows tile the arm's history after the initial pull
        for w in switches.windows(2) {
            assert_eq!(w[0].window.end, w[1].window.start);
        }
        assert_eq!(switches[0].window, 1..2);
        assert_eq!(st.open_window(0).start, 32);
        assert_eq!(st.global_counts(), &[38, 1]);
    }

    #[test]
    fn forgetting_uses_last_episode_only() {
        let mut noise = RngStream::new(0, 0);
        let mut st = PhaseState::initialize(&[0.0, 0.0], Release::Raw, &mut noise).unwrap();
        // arm 0: pulls 2..=4 are 1, 0, 0 -> phase 2 (N=2) mean 1, phase 3 (N=4) mean 0
        st.record(0, 1.0, 3, &mut noise).unwrap();
        assert_eq!(st.means()[0], 1.0);
        assert_eq!(st.phases()[0], 2);
        st.record(0, 0.0, 4, &mut noise).unwrap();
        assert_eq!(st.means()[0], 1.0);
        st.record(0, 0.0, 5, &mut noise).unwrap();
        assert_eq!(st.means()[0], 0.0);
        assert_eq!(st.local_counts()[0], 2);
        assert_eq!(st.phases()[0], 3);
    }

    #[test]
    fn laplace_release_adds_noise() {
        let mut noise = RngStream::new(3, 0);
        let raw = Release::Laplace { epsilon: 0.5, clip: false };
        let st = PhaseState::initialize(&[1.0, 0.0, 1.0], raw, &mut noise).unwrap();
        assert!(st.means().iter().zip([1.0, 0.0, 1.0]).all(|(m, x)| *m != x));
        let bad = Release::Laplace { epsilon: 0.0, clip: false };
        assert!(PhaseState::initialize(&[1.0, 0.0], bad, &mut noise).is_err());
    }

    #[test]
    fn clipped_release_stays_in_unit_interval() {
        let mut noise = RngStream::new(8, 0);
        let release = Release::Laplace { epsilon: 0.01, clip: true };
        let mut st = PhaseState::initialize(&[1.0, 0.0, 0.5, 0.5], release, &mut noise).unwrap();
        for t in 5..2000 {
            st.record(t as usize % 4, 0.5, t, &mut noise).unwrap();
            assert!(st.means().iter().all(|m| (0.0..=1.0).contains(m)));
        }
        assert!(PhaseState::initialize(&[1.0], Release::Raw, &mut noise).is_err());
    }
}
