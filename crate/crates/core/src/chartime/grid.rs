//! Brute-force reference solver: simplex lattice times a dense scan over the
//! common alternative mean. Shares nothing with the other solvers beyond the
//! divergence functions.

use rayon::prelude::*;

use super::{Allocation, CharTimeReport, SolverKind, ALT_CLAMP};
use crate::bandit::{gaps, BanditInstance};
use crate::divergence::{kl_unchecked, tv_bernoulli};
use crate::{Error, Result};

const MAX_ARMS: usize = 4;
const UNIFORM_POINTS: usize = 2000;
const BRACKET_POINTS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleObjective {
    Kl,
    Tv,
    Private { epsilon: f64 },
}

impl OracleObjective {
    /// `None` selects KL; `Some(ε)` the privacy-aware objective.
    pub fn from_epsilon(epsilon: Option<f64>) -> Self {
        match epsilon {
            Some(epsilon) => Self::Private { epsilon },
            None => Self::Kl,
        }
    }
}

/// Alternative means scanned by the inner minimisation.
fn scan_points(lo: f64, hi: f64) -> Vec<f64> {
    let mut xs: Vec<f64> = (1..=UNIFORM_POINTS)
        .map(|i| i as f64 / (UNIFORM_POINTS + 1) as f64)
        .chain((0..=BRACKET_POINTS).map(|i| lo + (hi - lo) * i as f64 / BRACKET_POINTS as f64))
        .map(|x| x.clamp(ALT_CLAMP, 1.0 - ALT_CLAMP))
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// Per-challenger divergence profiles over the scan points.
struct Profile {
    kl_best: Vec<f64>,
    kl_arm: Vec<f64>,
    tv_best: Vec<f64>,
    tv_arm: Vec<f64>,
}

impl Profile {
    fn new(mu_best: f64, mu_arm: f64) -> Self {
        let xs = scan_points(mu_arm.min(mu_best), mu_arm.max(mu_best));
        let map = |f: &dyn Fn(f64) -> f64| xs.iter().map(|&x| f(x)).collect::<Vec<_>>();
        Self {
            kl_best: map(&|x| kl_unchecked(mu_best, x)),
            kl_arm: map(&|x| kl_unchecked(mu_arm, x)),
            tv_best: map(&|x| tv_bernoulli(mu_best, x).unwrap_or(f64::INFINITY)),
            tv_arm: map(&|x| tv_bernoulli(mu_arm, x).unwrap_or(f64::INFINITY)),
        }
    }

    fn inner(&self, w_best: f64, w_arm: f64, objective: OracleObjective) -> f64 {
        let n = self.kl_best.len();
        let kl = |i: usize| w_best * self.kl_best[i] + w_arm * self.kl_arm[i];
        let tv = |i: usize| w_best * self.tv_best[i] + w_arm * self.tv_arm[i];
        (0..n)
            .map(|i| match objective {
                OracleObjective::Kl => kl(i),
                OracleObjective::Tv => tv(i),
                OracleObjective::Private { epsilon } => kl(i).min(6.0 * epsilon * tv(i)),
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Enumerates `(i_1, ..., i_K)` with `Σ i = resolution`.
fn compositions(arms: usize, resolution: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for i in 0..=left {
            prefix.push(i);
            rec(left - i, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(resolution, arms, &mut Vec::with_capacity(arms), &mut out);
    out
}

/// Best lattice point of `max_ω min_a inf_x (inner objective)`, lattice step `1/resolution`.
pub fn grid_oracle(
    instance: &BanditInstance,
    objective: OracleObjective,
    resolution: usize,
) -> Result<CharTimeReport> {
    let k = instance.arms();
    if k > MAX_ARMS {
        return Err(Error::TooManyArms(k));
    }
    if resolution < k {
        return Err(Error::domain(format!("resolution {resolution} is below the number of arms")));
    }
    if let OracleObjective::Private { epsilon } = objective {
        if !(epsilon > 0.0) {
            return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
        }
    }
    let g = gaps(instance)?;
    let mu = instance.means();
    let best = g.best;
    let profiles: Vec<Option<Profile>> = (0..k)
        .map(|a| (a != best).then(|| Profile::new(mu[best], mu[a])))
        .collect();
    let step = 1.0 / resolution as f64;

    // inner values depend only on (i_best, i_a); tabulate them for K ≥ 3
    let table: Option<Vec<Vec<f64>>> = (k >= 3).then(|| {
        profiles
            .iter()
            .map(|p| match p {
                None => Vec::new(),
                Some(p) => (0..(resolution + 1) * (resolution + 1))
                    .into_par_iter()
                    .map(|idx| {
                        let (ib, ia) = (idx / (resolution + 1), idx % (resolution + 1));
                        if ib + ia > resolution {
                            f64::NAN
                        } else {
                            p.inner(ib as f64 * step, ia as f64 * step, objective)
                        }
                    })
                    .collect(),
            })
            .collect()
    });

    let value_at = |point: &[usize]| -> f64 {
        (0..k)
            .filter(|&a| a != best)
            .map(|a| match &table {
                Some(t) => t[a][point[best] * (resolution + 1) + point[a]],
                None => profiles[a].as_ref().map_or(f64::INFINITY, |p| {
                    p.inner(point[best] as f64 * step, point[a] as f64 * step, objective)
                }),
            })
            .fold(f64::INFINITY, f64::min)
    };

    let points = compositions(k, resolution);
    let (value, argmax) = points
        .par_iter()
        .map(|p| (value_at(p), p))
        .reduce_with(|x, y| if y.0 > x.0 { y } else { x })
        .ok_or_else(|| Error::domain("empty lattice"))?;
    if !(value > 0.0) {
        return Err(Error::domain("grid objective is not positive"));
    }
    Ok(CharTimeReport {
        value: 1.0 / value,
        allocation: Allocation::from_weights(argmax.iter().map(|&i| i as f64).collect())?,
        solver: SolverKind::Grid,
        iterations: points.len(),
        residual: step,
    })
}
