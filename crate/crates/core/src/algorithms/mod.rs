//! Sequential identification strategies.
//!
//! Every strategy pulls each arm once, then runs until its stopping rule
//! fires or the pull budget `cap` is exhausted. A capped run is reported with
//! `capped = true` and the strategy's current best guess; it is not an error.

mod adap_tt;
mod dp_se;
mod phase;
mod selection;
mod tracking;
mod ttucb;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bandit::{best_arm, BanditInstance, RngStream};
use crate::{Error, Result};

pub use phase::{PhaseState, PhaseSwitch, Release};
pub use selection::{select_challenger, select_nonprivate_leader, select_private_leader, select_ucb_leader};
pub use tracking::{tracking_choice, TrackingState};

/// Fork labels separating reward draws from privacy noise within a run.
const REWARD_STREAM: u64 = 1;
const NOISE_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "adap-tt")]
    AdapTt,
    #[serde(rename = "adap-tt-np")]
    AdapTtNonPrivate,
    #[serde(rename = "ttucb")]
    Ttucb,
    #[serde(rename = "dp-se")]
    DpSe,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Self::AdapTt, Self::AdapTtNonPrivate, Self::Ttucb, Self::DpSe];

    pub fn name(self) -> &'static str {
        match self {
            Self::AdapTt => "adap-tt",
            Self::AdapTtNonPrivate => "adap-tt-np",
            Self::Ttucb => "ttucb",
            Self::DpSe => "dp-se",
        }
    }

    /// Whether the strategy reads `epsilon`.
    pub fn is_private(self) -> bool {
        matches!(self, Self::AdapTt | Self::DpSe)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub delta: f64,
    pub epsilon: f64,
    pub beta: f64,
    /// Exponent `s > 1` of the phase-product union bound in the thresholds.
    pub s: f64,
    /// Hard budget on the number of pulls.
    pub cap: u64,
    /// Clip AdaP-TT's released means to `[0, 1]`.
    pub clip: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            delta: 0.01,
            epsilon: 1.0,
            beta: 0.5,
            s: 2.0,
            cap: 1_000_000_000,
            clip: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::Config(format!("beta must lie in (0, 1), got {}", self.beta)));
        }
        if !(self.s > 1.0) {
            return Err(Error::Config(format!("s must exceed 1, got {}", self.s)));
        }
        if self.cap == 0 {
            return Err(Error::Config("cap must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub algorithm: Algorithm,
    /// Number of pulls when the strategy stopped.
    pub stopping_time: u64,
    pub recommended_arm: usize,
    pub correct: bool,
    pub seed: u64,
    pub stream: u64,
    pub counts: Vec<u64>,
    /// The pull budget ran out before the stopping rule fired.
    pub capped: bool,
    pub duration: Duration,
}

/// One leader/challenger round of a Top Two strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundInfo {
    /// Round index `n > K`; the pull of this round is the `n`-th.
    pub time: u64,
    pub leader: usize,
    pub challenger: usize,
    pub pulled: usize,
    pub reward: f64,
}

/// Hooks for audits and traces. All methods default to no-ops.
pub trait RunObserver {
    fn on_pull(&mut self, _time: u64, _arm: usize) {}

    /// Called after the round's pull. `phases` holds the statistics the
    /// round's decisions were made from (phased strategies only).
    fn on_round(&mut self, _round: &RoundInfo, _tracking: &TrackingState, _phases: Option<&PhaseState>) {}

    fn on_phase_switch(&mut self, _switch: &PhaseSwitch) {}

    fn on_finish(&mut self, _phases: Option<&PhaseState>) {}
}

/// Observer that records nothing.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoObserver;

impl RunObserver for NoObserver {}

/// What a strategy hands back before bookkeeping.
pub(crate) struct Outcome {
    pulls: u64,
    recommendation: usize,
    counts: Vec<u64>,
    capped: bool,
}

pub fn run(
    algorithm: Algorithm,
    instance: &BanditInstance,
    config: &RunConfig,
    rng: &RngStream,
) -> Result<RunResult> {
    run_observed(algorithm, instance, config, rng, &mut NoObserver)
}

pub fn run_observed(
    algorithm: Algorithm,
    instance: &BanditInstance,
    config: &RunConfig,
    rng: &RngStream,
    observer: &mut dyn RunObserver,
) -> Result<RunResult> {
    config.validate()?;
    let best = best_arm(instance)?;
    let start = Instant::now();
    let outcome = match algorithm {
        Algorithm::AdapTt => adap_tt::run_phased(
            instance,
            config,
            Release::Laplace {
                epsilon: config.epsilon,
                clip: config.clip,
            },
            rng,
            observer,
        )?,
        Algorithm::AdapTtNonPrivate => {
            adap_tt::run_phased(instance, config, Release::Raw, rng, observer)?
        }
        Algorithm::Ttucb => ttucb::run(instance, config, rng, observer)?,
        Algorithm::DpSe => dp_se::run(instance, config, rng, observer)?,
    };
    Ok(RunResult {
        algorithm,
        stopping_time: outcome.pulls,
        recommended_arm: outcome.recommendation,
        correct: outcome.recommendation == best,
        seed: rng.seed(),
        stream: rng.stream(),
        counts: outcome.counts,
        capped: outcome.capped,
        duration: start.elapsed(),
    })
}

pub fn run_adap_tt(instance: &BanditInstance, config: &RunConfig, rng: &RngStream) -> Result<RunResult> {
    run(Algorithm::AdapTt, instance, config, rng)
}

pub fn run_adap_tt_nonprivate(instance: &BanditInstance, config: &RunConfig, rng: &RngStream) -> Result<RunResult> {
    run(Algorithm::AdapTtNonPrivate, instance, config, rng)
}

pub fn run_ttucb(instance: &BanditInstance, config: &RunConfig, rng: &RngStream) -> Result<RunResult> {
    run(Algorithm::Ttucb, instance, config, rng)
}

pub fn run_dp_se(instance: &BanditInstance, config: &RunConfig, rng: &RngStream) -> Result<RunResult> {
    run(Algorithm::DpSe, instance, config, rng)
}
