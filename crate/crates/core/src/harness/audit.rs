//! Property audits behind `adaptt check`.

use std::fmt;
use std::str::FromStr;

use super::instances::named_instance;
use super::sweep::{run_sweep, SweepConfig};
use crate::algorithms::{
    run_observed, Algorithm, PhaseState, PhaseSwitch, RoundInfo, RunConfig, RunObserver, TrackingState,
};
use crate::bandit::RngStream;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Invariants,
    Correctness,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "invariants" => Ok(Self::Invariants),
            "correctness" => Ok(Self::Correctness),
            other => Err(Error::Config(format!("unknown suite `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for AuditLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Checks the tracking band, the doubling counts and the episode tiling of
/// one phased run as it happens.
#[derive(Debug, Clone)]
pub struct InvariantObserver {
    beta: f64,
    pub rounds: u64,
    pub switches: u64,
    /// Extreme values of `N^a_a - β L_a` over all arms and rounds.
    pub min_deviation: f64,
    pub max_deviation: f64,
    pub doubling_violations: u64,
    pub window_violations: u64,
    // end of the last closed window per arm
    window_ends: Vec<u64>,
}

impl InvariantObserver {
    pub fn new(arms: usize, beta: f64) -> Self {
        Self {
            beta,
            rounds: 0,
            switches: 0,
            min_deviation: f64::INFINITY,
            max_deviation: f64::NEG_INFINITY,
            doubling_violations: 0,
            window_violations: 0,
            // the initialisation pull occupies index 0 of every arm
            window_ends: vec![1; arms],
        }
    }

    pub fn tracking_ok(&self) -> bool {
        self.rounds == 0 || (self.min_deviation >= -0.5 && self.max_deviation <= 1.0)
    }

    pub fn ok(&self) -> bool {
        self.tracking_ok() && self.doubling_violations == 0 && self.window_violations == 0
    }
}

impl RunObserver for InvariantObserver {
    fn on_round(&mut self, _round: &RoundInfo, tracking: &TrackingState, _phases: Option<&PhaseState>) {
        self.rounds += 1;
        for a in 0..self.window_ends.len() {
            if tracking.leader_count(a) > 0 {
                let d = tracking.deviation(a, self.beta);
                self.min_deviation = self.min_deviation.min(d);
                self.max_deviation = self.max_deviation.max(d);
            }
        }
    }

    fn on_phase_switch(&mut self, s: &PhaseSwitch) {
        self.switches += 1;
        if s.phase < 2 || s.global_count != 1 << (s.phase - 1) || s.local_count != 1 << (s.phase - 2) {
            self.doubling_violations += 1;
        }
        if s.window.start != self.window_ends[s.arm] || s.window.end != s.global_count {
            self.window_violations += 1;
        }
        self.window_ends[s.arm] = s.window.end;
    }

    fn on_finish(&mut self, phases: Option<&PhaseState>) {
        let Some(state) = phases else { return };
        for a in 0..state.arms() {
            let open = state.open_window(a);
            if open.start != self.window_ends[a] || open.end != state.global_counts()[a] {
                self.window_violations += 1;
            }
        }
    }
}

/// Tracking, doubling and tiling checks on `runs` AdaP-TT runs on μ1 with
/// ε = 0.5 and δ = 0.05.
pub fn invariant_audit(runs: usize, seed: u64) -> Result<Vec<AuditLine>> {
    let instance = named_instance("mu1").expect("mu1 is built in");
    let config = RunConfig { epsilon: 0.5, delta: 0.05, ..RunConfig::default() };
    let mut lines = Vec::new();
    let mut total = InvariantObserver::new(instance.arms(), config.beta);
    for r in 0..runs {
        let mut obs = InvariantObserver::new(instance.arms(), config.beta);
        run_observed(Algorithm::AdapTt, &instance, &config, &RngStream::new(seed, r as u64), &mut obs)?;
        total.rounds += obs.rounds;
        total.switches += obs.switches;
        total.min_deviation = total.min_deviation.min(obs.min_deviation);
        total.max_deviation = total.max_deviation.max(obs.max_deviation);
        total.doubling_violations += obs.doubling_violations;
        total.window_violations += obs.window_violations;
    }
    lines.push(AuditLine {
        name: "tracking band".into(),
        passed: total.tracking_ok(),
        detail: format!(
            "N^a_a - beta L_a in [{:.3}, {:.3}] over {} rounds of {runs} runs",
            total.min_deviation, total.max_deviation, total.rounds
        ),
    });
    lines.push(AuditLine {
        name: "doubling counts".into(),
        passed: total.doubling_violations == 0 && total.switches > 0,
        detail: format!("{} violations in {} phase switches", total.doubling_violations, total.switches),
    });
    lines.push(AuditLine {
        name: "episode tiling".into(),
        passed: total.window_violations == 0,
        detail: format!("{} windows out of place", total.window_violations),
    });
    Ok(lines)
}

/// Error counts on μ1 with δ = 0.01 for AdaP-TT (ε = 0.1 and 1), the
/// non-private baseline, TTUCB and DP-SE (ε = 1). A cell passes with at most
/// `max_errors` wrong recommendations.
pub fn correctness_audit(runs: usize, seed: u64, max_errors: usize) -> Result<Vec<AuditLine>> {
    let instance = named_instance("mu1").expect("mu1 is built in");
    let cells: [(Algorithm, &[f64]); 4] = [
        (Algorithm::AdapTt, &[0.1, 1.0]),
        (Algorithm::AdapTtNonPrivate, &[1.0]),
        (Algorithm::Ttucb, &[1.0]),
        (Algorithm::DpSe, &[1.0]),
    ];
    let mut lines = Vec::new();
    for (algorithm, epsilons) in cells {
        let config = SweepConfig {
            algorithms: vec![algorithm],
            epsilons: epsilons.to_vec(),
            delta: 0.01,
            runs,
            seed,
            ..SweepConfig::new("mu1", &instance)
        };
        let records = run_sweep(&config)?;
        for (i, &eps) in epsilons.iter().enumerate() {
            let cell = &records[i * runs..(i + 1) * runs];
            let errors = cell.iter().filter(|r| !r.correct).count();
            let capped = cell.iter().filter(|r| r.capped).count();
            let consistent = cell.iter().all(|r| r.correct == (r.recommended_arm == 0));
            let label = if algorithm.is_private() { format!("{algorithm} eps={eps}") } else { algorithm.to_string() };
            lines.push(AuditLine {
                name: label,
                passed: errors <= max_errors && consistent,
                detail: format!("{errors}/{runs} errors, {capped} capped"),
            });
        }
    }
    Ok(lines)
}

pub fn run_suite(suite: Suite, runs: usize, seed: u64) -> Result<Vec<AuditLine>> {
    match suite {
        Suite::Invariants => invariant_audit(runs, seed),
        Suite::Correctness => correctness_audit(runs, seed, 4),
    }
}
