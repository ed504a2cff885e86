//! Leader and challenger rules. Ties go to the lowest arm index.

use super::phase::PhaseState;
use crate::threshold::argmax;
use crate::{Error, Result};

fn check_initialized(state: &PhaseState) -> Result<()> {
    if state.local_counts().contains(&0) || state.global_counts().contains(&0) {
        return Err(Error::Uninitialized);
    }
    Ok(())
}

fn phased_leader(state: &PhaseState, index: impl Fn(f64, f64, f64) -> f64) -> usize {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for a in 0..state.arms() {
        let v = index(state.means()[a], state.phases()[a] as f64, state.local_counts()[a] as f64);
        if v > best_value {
            best = a;
            best_value = v;
        }
    }
    best
}

/// `argmax_a μ̃_a + sqrt(k_a / Ñ_a) + k_a / (ε Ñ_a)`.
pub fn select_private_leader(state: &PhaseState, epsilon: f64) -> Result<usize> {
    check_initialized(state)?;
    Ok(phased_leader(state, |m, k, n| m + (k / n).sqrt() + k / (epsilon * n)))
}

/// `argmax_a μ̂_a + sqrt(k_a / Ñ_a)`.
pub fn select_nonprivate_leader(state: &PhaseState) -> Result<usize> {
    check_initialized(state)?;
    Ok(phased_leader(state, |m, k, n| m + (k / n).sqrt()))
}

/// `argmin_{a ≠ leader} (m_leader - m_a) / sqrt(1/N_leader + 1/N_a)` over
/// global counts.
pub fn select_challenger(means: &[f64], counts: &[u64], leader: usize) -> Result<usize> {
    if means.len() < 2 || counts.len() != means.len() || leader >= means.len() {
        return Err(Error::domain("challenger needs at least two arms and a valid leader"));
    }
    if counts.contains(&0) {
        return Err(Error::Uninitialized);
    }
    // ranks by sign(d) d² / (1/N_B + 1/N_a), an increasing transform of the
    // signed cost that skips the square root
    let (ml, inv_l) = (means[leader], 1.0 / counts[leader] as f64);
    let mut best = usize::MAX;
    let mut best_cost = f64::INFINITY;
    for a in (0..means.len()).filter(|&a| a != leader) {
        let d = ml - means[a];
        let cost = d * d.abs() / (inv_l + 1.0 / counts[a] as f64);
        if best == usize::MAX || cost < best_cost {
            best = a;
            best_cost = cost;
        }
    }
    Ok(best)
}

/// `argmax_a μ̂_a + sqrt(6 log(n) / N_a)` on full-history statistics.
pub fn select_ucb_leader(means: &[f64], counts: &[u64], round: u64) -> Result<usize> {
    if counts.contains(&0) {
        return Err(Error::Uninitialized);
    }
    let log_n = 6.0 * (round as f64).ln();
    let index: Vec<f64> = means
        .iter()
        .zip(counts)
        .map(|(m, &n)| m + (log_n / n as f64).sqrt())
        .collect();
    Ok(argmax(&index))
}
