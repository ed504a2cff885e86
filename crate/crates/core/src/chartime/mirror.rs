//! Entropic mirror ascent for the Bernoulli max-min games.
//!
//! The objective `F(ω) = min_{a ≠ a*} f_a(ω*, ω_a)` is concave on the simplex.
//! Each `f_a` is an infimum over the common alternative mean `x`; by the
//! envelope theorem its gradient in `(ω*, ω_a)` is `(d(μ*, x), d(μ_a, x))`
//! at the minimiser. The supergradient of the min averages the arms that
//! attain it.

use super::{Allocation, CharTimeReport, SolverKind, ALT_CLAMP};
use crate::bandit::{gaps, BanditInstance};
use crate::divergence::kl_unchecked;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorAscentConfig {
    /// Relative improvement of the best value over `window` iterations below
    /// which the solver stops.
    pub tol: f64,
    pub max_iter: usize,
    pub window: usize,
    /// No convergence test before this many iterations.
    pub min_iter: usize,
    /// Base step; the iteration-`t` step is `step / (‖g‖∞ √t)`.
    pub step: f64,
}

impl Default for MirrorAscentConfig {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            max_iter: 100_000,
            window: 50,
            min_iter: 2_000,
            step: 1.0,
        }
    }
}

/// Value and gradient `(∂/∂ω*, ∂/∂ω_a)` of one challenger's inner problem.
#[derive(Debug, Clone, Copy)]
struct Inner {
    value: f64,
    grad_best: f64,
    grad_arm: f64,
}

fn clamp_alt(x: f64) -> f64 {
    x.clamp(ALT_CLAMP, 1.0 - ALT_CLAMP)
}

/// `inf_x ω* kl(μ*, x) + ω_a kl(μ_a, x)`, attained at the weighted mean.
fn kl_inner(w_best: f64, mu_best: f64, w_arm: f64, mu_arm: f64) -> Inner {
    let total = w_best + w_arm;
    let x = if total > 0.0 {
        clamp_alt((w_best * mu_best + w_arm * mu_arm) / total)
    } else {
        clamp_alt(0.5 * (mu_best + mu_arm))
    };
    let (gb, ga) = (kl_unchecked(mu_best, x), kl_unchecked(mu_arm, x));
    Inner {
        value: w_best * gb + w_arm * ga,
        grad_best: gb,
        grad_arm: ga,
    }
}

/// `6ε min(ω*, ω_a) Δ_a`.
fn tv_inner(w_best: f64, w_arm: f64, gap: f64, scale: f64) -> Inner {
    let slope = scale * gap;
    let value = slope * w_best.min(w_arm);
    let (grad_best, grad_arm) = if w_best < w_arm {
        (slope, 0.0)
    } else if w_arm < w_best {
        (0.0, slope)
    } else {
        (0.5 * slope, 0.5 * slope)
    };
    Inner {
        value,
        grad_best,
        grad_arm,
    }
}

fn check_config(cfg: &MirrorAscentConfig) -> Result<()> {
    if !(cfg.tol > 0.0) || cfg.window == 0 || cfg.max_iter == 0 || !(cfg.step > 0.0) {
        return Err(Error::domain("invalid mirror ascent configuration"));
    }
    Ok(())
}

fn maximize_min(
    arms: usize,
    best: usize,
    cfg: &MirrorAscentConfig,
    inner: impl Fn(usize, f64, f64) -> Inner,
) -> Result<CharTimeReport> {
    check_config(cfg)?;
    let evaluate = |w: &[f64], grad: Option<&mut Vec<f64>>| -> f64 {
        let values: Vec<(usize, Inner)> = (0..arms)
            .filter(|&a| a != best)
            .map(|a| (a, inner(a, w[best], w[a])))
            .collect();
        let fmin = values.iter().map(|(_, v)| v.value).fold(f64::INFINITY, f64::min);
        if let Some(grad) = grad {
            grad.iter_mut().for_each(|g| *g = 0.0);
            let slack = 1e-12 * fmin.abs().max(1.0);
            let mut ties = 0.0;
            for (a, v) in values.iter().filter(|(_, v)| v.value <= fmin + slack) {
                grad[best] += v.grad_best;
                grad[*a] += v.grad_arm;
                ties += 1.0;
            }
            grad.iter_mut().for_each(|g| *g /= ties);
        }
        fmin
    };

    let mut w = vec![1.0 / arms as f64; arms];
    let mut avg = vec![0.0; arms];
    let mut avg_mass = 0.0;
    let mut grad = vec![0.0; arms];
    let mut best_value = f64::NEG_INFINITY;
    let mut best_w = w.clone();
    let mut history = Vec::with_capacity(cfg.max_iter.min(1 << 16));
    let mut residual = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;

    for t in 1..=cfg.max_iter {
        iterations = t;
        let value = evaluate(&w, Some(&mut grad));
        if value > best_value {
            best_value = value;
            best_w.copy_from_slice(&w);
        }
        if avg_mass > 0.0 {
            let mean: Vec<f64> = avg.iter().map(|x| x / avg_mass).collect();
            let v = evaluate(&mean, None);
            if v > best_value {
                best_value = v;
                best_w = mean;
            }
        }
        history.push(best_value);
        if t > cfg.window {
            let old = history[t - 1 - cfg.window];
            residual = (best_value - old) / best_value.abs().max(f64::MIN_POSITIVE);
            if t >= cfg.min_iter && residual < cfg.tol {
                converged = true;
                break;
            }
        }

        let gmax = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        if !(gmax > 0.0) || !gmax.is_finite() {
            return Err(Error::NonConvergence { iterations: t });
        }
        let eta = cfg.step / (gmax * (t as f64).sqrt());
        let mut total = 0.0;
        for (wi, gi) in w.iter_mut().zip(&grad) {
            // shift by gmax so exponents are ≤ 0
            *wi *= (eta * (gi - gmax)).exp();
            total += *wi;
        }
        for wi in w.iter_mut() {
            *wi = (*wi / total).max(1e-300);
        }
        for (a, wi) in avg.iter_mut().zip(&w) {
            *a += eta * wi;
        }
        avg_mass += eta;
    }

    if !converged {
        return Err(Error::NonConvergence { iterations });
    }
    Ok(CharTimeReport {
        value: 1.0 / best_value,
        allocation: Allocation::from_weights(best_w)?,
        solver: SolverKind::MirrorAscent,
        iterations,
        residual,
    })
}

/// `T*_KL` for Bernoulli arms.
pub fn kl_char_time_bernoulli(
    instance: &BanditInstance,
    cfg: &MirrorAscentConfig,
) -> Result<CharTimeReport> {
    let g = gaps(instance)?;
    let mu = instance.means();
    let best = g.best;
    maximize_min(instance.arms(), best, cfg, |a, wb, wa| {
        kl_inner(wb, mu[best], wa, mu[a])
    })
}

/// `T*(ν; ε)`: the inner value is the smaller of the KL and `6ε`-scaled TV values.
pub fn private_char_time(
    instance: &BanditInstance,
    epsilon: f64,
    cfg: &MirrorAscentConfig,
) -> Result<CharTimeReport> {
    if !(epsilon > 0.0) {
        return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let g = gaps(instance)?;
    let mu = instance.means();
    let best = g.best;
    let scale = 6.0 * epsilon;
    maximize_min(instance.arms(), best, cfg, |a, wb, wa| {
        let kl = kl_inner(wb, mu[best], wa, mu[a]);
        let tv = tv_inner(wb, wa, g.gaps[a], scale);
        if tv.value < kl.value {
            tv
        } else {
            kl
        }
    })
}
