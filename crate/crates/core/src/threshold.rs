//! GLR stopping thresholds and the stopping predicate.
//!
//! The non-private threshold for a pair of episodes whose phase indices
//! multiply to `k` is
//!
//! ```text
//! c_k(n, m, δ) = 2 C_G(½ log((K-1) ζ(s)² kˢ / δ)) + 2 log(4 + log n) + 2 log(4 + log m)
//! ```
//!
//! and the private one adds a Laplace term per episode on top of
//! `2 c_{k1 k2}(n, m, δ/2)`. A pair passes when its GLR statistic reaches
//! twice the threshold.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::divergence::glr_unchecked;
use crate::zeta::riemann_zeta;
use crate::{Error, Result};

const LAMBDA_LO: f64 = 0.5 + 1e-9;
const LAMBDA_HI: f64 = 1.0;
const LAMBDA_TOL: f64 = 1e-8;

/// Union-bound exponent `s` and arm count `K` shared by every threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdParams {
    s: f64,
    arms: usize,
    zeta_s: f64,
}

impl ThresholdParams {
    pub fn new(s: f64, arms: usize) -> Result<Self> {
        if arms < 2 {
            return Err(Error::domain(format!("need at least 2 arms, got {arms}")));
        }
        let zeta_s = riemann_zeta(s)?;
        Ok(Self { s, arms, zeta_s })
    }

    /// `s = 2`, i.e. `ζ(s) = π²/6`.
    pub fn with_arms(arms: usize) -> Result<Self> {
        Self::new(2.0, arms)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    pub fn zeta_s(&self) -> f64 {
        self.zeta_s
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("delta must lie in (0, 1), got {delta}")))
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("epsilon must be positive, got {epsilon}")))
    }
}

fn check_counts(k: u64, n: u64, m: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("phase index must be at least 1"));
    }
    if n == 0 || m == 0 {
        return Err(Error::ZeroCount);
    }
    Ok(())
}

/// `g_G(λ) = 2λ - 2λ log(4λ) + log ζ(2λ) - ½ log(1 - λ)`, `+inf` outside `(½, 1)`.
pub fn g_gaussian(lambda: f64) -> f64 {
    if !(lambda > 0.5 && lambda < 1.0) {
        return f64::INFINITY;
    }
    let zeta = riemann_zeta(2.0 * lambda).expect("2λ > 1");
    2.0 * lambda - 2.0 * lambda * (4.0 * lambda).ln() + zeta.ln() - 0.5 * (1.0 - lambda).ln()
}

/// `C_G(x) = min_{λ ∈ (½, 1]} (g_G(λ) + x) / λ`, by golden-section search.
pub fn c_gaussian(x: f64) -> Result<f64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::domain(format!("C_G requires x >= 1, got {x}")));
    }
    let objective = |lambda: f64| (g_gaussian(lambda) + x) / lambda;
    let (lambda, value) = golden_section_min(objective, LAMBDA_LO, LAMBDA_HI, LAMBDA_TOL);
    debug_assert!(lambda > 0.5);
    Ok(value)
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Argument of `C_G` inside `c_k`: `½ log((K-1) ζ(s)² kˢ / δ)`.
fn c_gaussian_argument(k: u64, delta: f64, params: &ThresholdParams) -> f64 {
    let arms = params.arms as f64;
    let zeta = params.zeta_s;
    0.5 * (((arms - 1.0) * zeta * zeta * (k as f64).powf(params.s)) / delta).ln()
}

fn iterated_log_terms(n: u64, m: u64) -> f64 {
    2.0 * (4.0 + (n as f64).ln()).ln() + 2.0 * (4.0 + (m as f64).ln()).ln()
}

/// Non-private threshold `c_k(n, m, δ)`.
pub fn nonprivate_threshold(
    k: u64,
    n: u64,
    m: u64,
    delta: f64,
    params: &ThresholdParams,
) -> Result<f64> {
    check_counts(k, n, m)?;
    check_delta(delta)?;
    let cg = c_gaussian(c_gaussian_argument(k, delta, params))?;
    Ok(2.0 * cg + iterated_log_terms(n, m))
}

/// Laplace correction `(1/(n ε²)) log(2 K k₁ˢ ζ(s) / δ)² + (1/(m ε²)) log(2 K k₂ˢ ζ(s) / δ)²`.
fn laplace_terms(k1: u64, k2: u64, n: u64, m: u64, delta: f64, epsilon: f64, params: &ThresholdParams) -> f64 {
    let base = 2.0 * params.arms as f64 * params.zeta_s / delta;
    let l1 = (base * (k1 as f64).powf(params.s)).ln();
    let l2 = (base * (k2 as f64).powf(params.s)).ln();
    let e2 = epsilon * epsilon;
    l1 * l1 / (n as f64 * e2) + l2 * l2 / (m as f64 * e2)
}

/// Private threshold `c_{ε,k1,k2}(n, m, δ) = 2 c_{k1 k2}(n, m, δ/2) + Laplace terms`.
#[allow(clippy::too_many_arguments)]
pub fn private_threshold(
    k1: u64,
    k2: u64,
    n: u64,
    m: u64,
    delta: f64,
    epsilon: f64,
    params: &ThresholdParams,
) -> Result<f64> {
    check_counts(k1, n, m)?;
    check_counts(k2, n, m)?;
    check_delta(delta)?;
    check_epsilon(epsilon)?;
    let base = nonprivate_threshold(k1 * k2, n, m, delta / 2.0, params)?;
    Ok(2.0 * base + laplace_terms(k1, k2, n, m, delta, epsilon, params))
}

/// Which threshold family the GLR predicate compares against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StoppingRule {
    /// Private means, `c_{ε,k1,k2}`.
    Private { epsilon: f64 },
    /// Raw means, `c_{k1 k2}`.
    NonPrivate,
}

/// Outcome of one evaluation of the GLR stopping predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopDecision {
    pub stop: bool,
    pub candidate: usize,
}

/// GLR stopping predicate with the `C_G` evaluations memoised per phase product.
#[derive(Debug, Clone)]
pub struct GlrStopper {
    params: ThresholdParams,
    delta: f64,
    rule: StoppingRule,
    c_gaussian_cache: HashMap<u64, f64>,
}

impl GlrStopper {
    pub fn new(params: ThresholdParams, delta: f64, rule: StoppingRule) -> Result<Self> {
        check_delta(delta)?;
        if let StoppingRule::Private { epsilon } = rule {
            check_epsilon(epsilon)?;
        }
        Ok(Self {
            params,
            delta,
            rule,
            c_gaussian_cache: HashMap::new(),
        })
    }

    fn nonprivate(&mut self, k: u64, n: u64, m: u64, delta: f64) -> Result<f64> {
        let cg = match self.c_gaussian_cache.get(&k) {
            Some(&v) => v,
            None => {
                let v = c_gaussian(c_gaussian_argument(k, delta, &self.params))?;
                self.c_gaussian_cache.insert(k, v);
                v
            }
        };
        Ok(2.0 * cg + iterated_log_terms(n, m))
    }

    /// Threshold for the pair (candidate with phase `k1` and `n` samples,
    /// challenger with phase `k2` and `m` samples).
    pub fn threshold(&mut self, k1: u64, k2: u64, n: u64, m: u64) -> Result<f64> {
        check_counts(k1, n, m)?;
        check_counts(k2, n, m)?;
        match self.rule {
            StoppingRule::NonPrivate => self.nonprivate(k1 * k2, n, m, self.delta),
            StoppingRule::Private { epsilon } => {
                let base = self.nonprivate(k1 * k2, n, m, self.delta / 2.0)?;
                Ok(2.0 * base + laplace_terms(k1, k2, n, m, self.delta, epsilon, &self.params))
            }
        }
    }

    /// Candidate is the argmax of `means` (lowest index on ties); stop when
    /// every other arm's GLR statistic against it reaches twice the threshold.
    pub fn check(&mut self, means: &[f64], local_counts: &[u64], phases: &[u32]) -> Result<StopDecision> {
        let arms = means.len();
        if local_counts.len() != arms || phases.len() != arms || arms < 2 {
            return Err(Error::domain("mismatched per-arm statistics"));
        }
        if local_counts.iter().any(|&n| n == 0) {
            return Err(Error::ZeroCount);
        }
        let candidate = argmax(means);
        let (mc, nc, kc) = (means[candidate], local_counts[candidate], phases[candidate] as u64);
        for b in (0..arms).filter(|&b| b != candidate) {
            let stat = glr_unchecked(mc, means[b], nc as f64, local_counts[b] as f64);
            let threshold = self.threshold(kc, phases[b] as u64, nc, local_counts[b])?;
            if stat < 2.0 * threshold {
                return Ok(StopDecision { stop: false, candidate });
            }
        }
        Ok(StopDecision { stop: true, candidate })
    }
}

/// One-shot GLR stopping check. Strategies reuse a [`GlrStopper`] instead.
pub fn should_stop(
    means: &[f64],
    local_counts: &[u64],
    phases: &[u32],
    delta: f64,
    params: &ThresholdParams,
    rule: StoppingRule,
) -> Result<StopDecision> {
    GlrStopper::new(*params, delta, rule)?.check(means, local_counts, phases)
}

/// First index attaining the maximum.
pub(crate) fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}
