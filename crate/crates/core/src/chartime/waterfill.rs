//! β-optimal allocation for Gaussian (unit variance) arms.
//!
//! With `ω* = β` fixed, the optimum equalises the transportation costs
//! `Δ_a² / (1/β + 1/ω_a) = c` across suboptimal arms. Solving for `ω_a`
//! gives `ω_a(c) = 1 / (Δ_a²/c - 1/β)`, increasing in `c` on
//! `(0, β Δ_min²)`, so the common level is found by bisection on
//! `Σ_a ω_a(c) = 1 - β`. Then `T*_{KL,β} = 2 / c`.

use super::{Allocation, CharTimeReport, SolverKind};
use crate::bandit::GapVector;
use crate::{Error, Result};

const MAX_BISECTIONS: usize = 400;

fn check_gaps(gaps: &GapVector) -> Result<()> {
    match gaps.suboptimal().find(|&(_, g)| !(g > 0.0)) {
        Some((a, _)) => Err(Error::ZeroGap(a)),
        None => Ok(()),
    }
}

fn weight_at(gap: f64, level: f64, beta: f64) -> f64 {
    1.0 / (gap * gap / level - 1.0 / beta)
}

pub fn kl_beta_char_time_gaussian(gaps: &GapVector, beta: f64) -> Result<CharTimeReport> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(format!("beta must lie in (0, 1), got {beta}")));
    }
    check_gaps(gaps)?;
    let target = 1.0 - beta;
    let mass = |level: f64| -> f64 {
        gaps.suboptimal()
            .map(|(_, g)| weight_at(g, level, beta))
            .sum()
    };

    let mut lo = 0.0;
    let mut hi = beta * gaps.min_gap * gaps.min_gap;
    let mut iterations = 0;
    while iterations < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mass(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    if iterations == MAX_BISECTIONS {
        return Err(Error::NonConvergence { iterations });
    }
    let level = 0.5 * (lo + hi);

    let mut weights = vec![0.0; gaps.arms()];
    weights[gaps.best] = beta;
    for (a, g) in gaps.suboptimal() {
        weights[a] = weight_at(g, level, beta);
    }
    let residual = (weights.iter().sum::<f64>() - 1.0).abs();
    Ok(CharTimeReport {
        value: 2.0 / level,
        allocation: Allocation::from_weights(weights)?,
        solver: SolverKind::WaterFill,
        iterations,
        residual,
    })
}

/// `Δ_a² / (1/ω* + 1/ω_a)` for every suboptimal arm, in arm order.
pub fn gaussian_transport_costs(gaps: &GapVector, allocation: &Allocation) -> Vec<f64> {
    let w = allocation.weights();
    gaps.suboptimal()
        .map(|(a, g)| g * g / (1.0 / w[gaps.best] + 1.0 / w[a]))
        .collect()
}

/// `T*_KL = min_β T*_{KL,β}` for Gaussian arms, golden-section over β.
pub fn kl_char_time_gaussian(gaps: &GapVector, tol: f64) -> Result<CharTimeReport> {
    let f = |beta: f64| kl_beta_char_time_gaussian(gaps, beta).map(|r| r.value);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (1e-6, 1.0 - 1e-6);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    let mut iterations = 0;
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
        iterations += 1;
    }
    let beta = if fc < fd { c } else { d };
    let mut report = kl_beta_char_time_gaussian(gaps, beta)?;
    report.iterations += iterations;
    report.residual = b - a;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandit::{gaps, BanditInstance};

    fn g(m: &[f64]) -> GapVector {
        gaps(&BanditInstance::new(m.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn two_arm_closed_form() {
        let r = kl_beta_char_time_gaussian(&g(&[1.0, 0.0]), 0.5).unwrap();
        assert!((r.value - 8.0).abs() < 1e-9, "{}", r.value);
        let w = r.allocation.weights();
        assert!((w[0] - 0.5).abs() < 1e-12 && (w[1] - 0.5).abs() < 1e-9);

        // general β: T = 2 (1/β + 1/(1-β)) / Δ²
        for beta in [0.2, 0.35, 0.8] {
            let r = kl_beta_char_time_gaussian(&g(&[0.7, 0.3]), beta).unwrap();
            let want = 2.0 * (1.0 / beta + 1.0 / (1.0 - beta)) / 0.16;
            assert!((r.value - want).abs() < 1e-8 * want);
        }
    }

    #[test]
    fn equal_gaps_split_evenly() {
        for beta in [0.3, 0.5, 0.7] {
            let r = kl_beta_char_time_gaussian(&g(&[0.9, 0.6, 0.6]), beta).unwrap();
            let w = r.allocation.weights();
            assert!((w[1] - (1.0 - beta) / 2.0).abs() < 1e-9);
            assert!((w[2] - w[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn costs_equalise() {
        let gv = g(&[0.95, 0.9, 0.8, 0.6, 0.5]);
        for beta in [0.3, 0.5, 0.7] {
            let r = kl_beta_char_time_gaussian(&gv, beta).unwrap();
            let costs = gaussian_transport_costs(&gv, &r.allocation);
            let (lo, hi) = costs
                .iter()
                .fold((f64::INFINITY, 0.0f64), |(l, h), &c| (l.min(c), h.max(c)));
            assert!(hi - lo < 1e-8 * hi.max(1e-300).max(1.0), "spread {}", hi - lo);
            assert!((2.0 / r.value - lo).abs() < 1e-9);
            assert!((r.allocation.weights().iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn allocation_is_optimal_against_perturbations() {
        let gv = g(&[0.9, 0.8, 0.5, 0.45]);
        let beta = 0.5;
        let r = kl_beta_char_time_gaussian(&gv, beta).unwrap();
        let best = gaussian_transport_costs(&gv, &r.allocation)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        let w = r.allocation.weights().to_vec();
        for (i, j) in [(1, 2), (2, 3), (1, 3), (3, 1)] {
            let mut p = w.clone();
            p[i] += 1e-3;
            p[j] -= 1e-3;
            let alloc = Allocation::from_weights(p).unwrap();
            let v = gaussian_transport_costs(&gv, &alloc)
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            assert!(v <= best + 1e-15);
        }
    }

    #[test]
    fn beta_half_within_factor_two_of_optimal_beta() {
        let gv = g(&[0.95, 0.9, 0.9, 0.9, 0.5]);
        let half = kl_beta_char_time_gaussian(&gv, 0.5).unwrap().value;
        let opt = kl_char_time_gaussian(&gv, 1e-9).unwrap().value;
        // β scan oracle
        let scan = (1..1000)
            .map(|i| kl_beta_char_time_gaussian(&gv, i as f64 / 1000.0).unwrap().value)
            .fold(f64::INFINITY, f64::min);
        assert!(opt <= scan * (1.0 + 1e-9));
        assert!((opt - scan).abs() < 1e-3 * scan);
        assert!(half <= 2.0 * opt);
    }

    #[test]
    fn errors() {
        assert!(kl_beta_char_time_gaussian(&g(&[0.9, 0.1]), 0.0).is_err());
        assert!(kl_beta_char_time_gaussian(&g(&[0.9, 0.1]), 1.0).is_err());
        let mut gv = g(&[0.9, 0.1, 0.2]);
        gv.gaps[2] = 0.0;
        assert!(matches!(kl_beta_char_time_gaussian(&gv, 0.5), Err(Error::ZeroGap(2))));
    }
}
