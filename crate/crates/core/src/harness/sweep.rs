use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{run, Algorithm, RunConfig};
use crate::bandit::{best_arm, BanditInstance, RngStream};
use crate::{Error, Result};

/// The privacy levels of the full benchmark grid.
pub const DEFAULT_EPSILONS: [f64; 15] = [
    0.001, 0.005, 0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 10.0,
];

/// Desk-scale subset of [`DEFAULT_EPSILONS`].
pub const DESK_EPSILONS: [f64; 12] = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 10.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub instance_label: String,
    pub means: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    pub epsilons: Vec<f64>,
    pub delta: f64,
    pub beta: f64,
    pub runs: usize,
    pub seed: u64,
    pub cap: u64,
    pub s: f64,
    pub clip: bool,
}

impl SweepConfig {
    pub fn new(instance_label: impl Into<String>, instance: &BanditInstance) -> Self {
        let run = RunConfig::default();
        Self {
            instance_label: instance_label.into(),
            means: instance.means().to_vec(),
            algorithms: vec![Algorithm::AdapTt],
            epsilons: DESK_EPSILONS.to_vec(),
            delta: run.delta,
            beta: run.beta,
            runs: 100,
            seed: 0,
            cap: run.cap,
            s: run.s,
            clip: run.clip,
        }
    }

    pub fn instance(&self) -> Result<BanditInstance> {
        BanditInstance::new(self.means.clone()).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn run_config(&self, epsilon: f64) -> RunConfig {
        RunConfig {
            delta: self.delta,
            epsilon,
            beta: self.beta,
            s: self.s,
            cap: self.cap,
            clip: self.clip,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.algorithms.is_empty() || self.epsilons.is_empty() {
            return Err(Error::Config("need at least one algorithm and one epsilon".into()));
        }
        best_arm(&self.instance()?).map_err(|e| Error::Config(e.to_string()))?;
        for &eps in &self.epsilons {
            self.run_config(eps).validate()?;
        }
        Ok(())
    }
}

/// One row of the per-run CSV, in column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algo: Algorithm,
    pub instance: String,
    pub epsilon: f64,
    pub delta: f64,
    pub run_id: usize,
    pub seed: u64,
    pub stopping_time: u64,
    pub recommended_arm: usize,
    pub correct: bool,
    pub capped: bool,
}

/// 64-bit FNV-1a of `algo|instance|eps_index|run_index`.
pub fn stream_id(algorithm: Algorithm, instance: &str, eps_index: usize, run_index: usize) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    format!("{}|{}|{}|{}", algorithm.name(), instance, eps_index, run_index)
        .bytes()
        .fold(OFFSET, |h, b| (h ^ b as u64).wrapping_mul(PRIME))
}

/// Runs every (algorithm, ε, run) cell in parallel. The result is sorted by
/// algorithm order in the config, then ε index, then run index, so it does
/// not depend on scheduling.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let instance = config.instance()?;
    let jobs: Vec<(usize, usize, usize)> = (0..config.algorithms.len())
        .flat_map(|a| (0..config.epsilons.len()).flat_map(move |e| (0..config.runs).map(move |r| (a, e, r))))
        .collect();
    let mut records = jobs
        .par_iter()
        .map(|&(a, e, r)| {
            let algorithm = config.algorithms[a];
            let epsilon = config.epsilons[e];
            let rng = RngStream::new(config.seed, stream_id(algorithm, &config.instance_label, e, r));
            let result = run(algorithm, &instance, &config.run_config(epsilon), &rng)?;
            Ok(((a, e, r), RunRecord {
                algo: algorithm,
                instance: config.instance_label.clone(),
                epsilon,
                delta: config.delta,
                run_id: r,
                seed: config.seed,
                stopping_time: result.stopping_time,
                recommended_arm: result.recommended_arm,
                correct: result.correct,
                capped: result.capped,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|(key, _)| *key);
    Ok(records.into_iter().map(|(_, r)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_ids_are_distinct() {
        let mut ids: Vec<u64> = (0..4)
            .flat_map(|e| (0..50).map(move |r| stream_id(Algorithm::AdapTt, "mu1", e, r)))
            .collect();
        ids.push(stream_id(Algorithm::DpSe, "mu1", 0, 0));
        ids.push(stream_id(Algorithm::AdapTt, "mu2", 0, 0));
        let n = ids.len();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), n);
        // FNV-1a reference value for the empty string
        assert_eq!("".bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3)), 0xcbf2_9ce4_8422_2325);
    }

    #[test]
    fn config_validation() {
        let i = BanditInstance::new(vec![0.9, 0.1]).unwrap();
        let ok = SweepConfig::new("x", &i);
        assert!(ok.validate().is_ok());
        for bad in [
            SweepConfig { runs: 0, ..ok.clone() },
            SweepConfig { epsilons: vec![0.0], ..ok.clone() },
            SweepConfig { delta: 1.5, ..ok.clone() },
            SweepConfig { algorithms: vec![], ..ok.clone() },
            SweepConfig { means: vec![0.5, 0.5], ..ok.clone() },
        ] {
            assert!(matches!(bad.validate(), Err(Error::Config(_))));
        }
    }

    #[test]
    fn records_are_ordered_and_complete() {
        let i = BanditInstance::new(vec![1.0, 0.0]).unwrap();
        let cfg = SweepConfig {
            algorithms: vec![Algorithm::DpSe, Algorithm::AdapTt],
            epsilons: vec![10.0, 5.0],
            runs: 3,
            delta: 0.1,
            ..SweepConfig::new("deg", &i)
        };
        let recs = run_sweep(&cfg).unwrap();
        assert_eq!(recs.len(), 12);
        assert_eq!(recs[0].algo, Algorithm::DpSe);
        assert_eq!((recs[4].epsilon, recs[4].run_id), (5.0, 1));
        assert!(recs.iter().all(|r| r.correct && !r.capped));
    }
}
