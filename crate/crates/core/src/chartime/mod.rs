//! Lower-bound characteristic times.
//!
//! Every quantity here is the reciprocal of a max-min game over the simplex:
//! an allocation `ω` against the closest alternative instance in which some
//! suboptimal arm overtakes the best one. For Bernoulli arms the alternative
//! moves only the best arm and one challenger `a` to a common mean, so the
//! inner problem is one-dimensional per challenger.
//!
//! | quantity | inner value for challenger `a` | solver |
//! |----------|--------------------------------|--------|
//! | `T*_TV`  | `min(ω*, ω_a) Δ_a`             | closed form |
//! | `T*_KL`  | `ω* kl(μ*, x) + ω_a kl(μ_a, x)` at the weighted mean `x` | mirror ascent |
//! | `T*(ν;ε)`| `min(KL value, 6ε TV value)`   | mirror ascent |
//! | `T*_{KL,β}` (Gaussian) | `Δ_a² / (1/β + 1/ω_a)` with `ω* = β` | water-filling |

mod grid;
mod mirror;
mod waterfill;

use serde::{Deserialize, Serialize};

use crate::bandit::{gaps, BanditInstance, GapVector};
use crate::{Error, Result};

pub use grid::{grid_oracle, OracleObjective};
pub use mirror::{kl_char_time_bernoulli, private_char_time, MirrorAscentConfig};
pub use waterfill::{gaussian_transport_costs, kl_beta_char_time_gaussian, kl_char_time_gaussian};

/// Lower clamp for alternative means; the upper clamp is `1 - ALT_CLAMP`.
pub const ALT_CLAMP: f64 = 1e-9;

/// A point of the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation(Vec<f64>);

impl Allocation {
    /// Normalises non-negative weights onto the simplex.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::domain("allocation weights must be finite and non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::domain("allocation weights sum to zero"));
        }
        Ok(Self(weights.into_iter().map(|w| w / total).collect()))
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    ClosedForm,
    WaterFill,
    MirrorAscent,
    Grid,
}

/// A characteristic time `T` (samples per unit of `log(1/δ)`) with the
/// allocation that attains it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharTimeReport {
    pub value: f64,
    pub allocation: Allocation,
    pub solver: SolverKind,
    pub iterations: usize,
    pub residual: f64,
}

/// `T*_TV = 1/Δ_min + Σ_{a ≠ a*} 1/Δ_a`, attained at `ω_a ∝ Δ_min / Δ_a`, `ω* ∝ 1`.
pub fn tv_char_time_closed_form(gaps: &GapVector) -> Result<CharTimeReport> {
    if let Some((a, _)) = gaps.suboptimal().find(|&(_, g)| !(g > 0.0)) {
        return Err(Error::ZeroGap(a));
    }
    let value = 1.0 / gaps.min_gap + gaps.suboptimal().map(|(_, g)| 1.0 / g).sum::<f64>();
    let weights = (0..gaps.arms())
        .map(|a| {
            if a == gaps.best {
                1.0
            } else {
                gaps.min_gap / gaps.gaps[a]
            }
        })
        .collect();
    Ok(CharTimeReport {
        value,
        allocation: Allocation::from_weights(weights)?,
        solver: SolverKind::ClosedForm,
        iterations: 0,
        residual: 0.0,
    })
}

/// Convenience wrapper computing the gaps first.
pub fn tv_char_time(instance: &BanditInstance) -> Result<CharTimeReport> {
    tv_char_time_closed_form(&gaps(instance)?)
}

/// Privacy level `T*_TV / (6 T*_KL)` separating the high-privacy regime
/// (below) from the regime where privacy costs nothing asymptotically.
pub fn regime_boundary(instance: &BanditInstance) -> Result<f64> {
    let tv = tv_char_time(instance)?.value;
    let kl = kl_char_time_bernoulli(instance, &MirrorAscentConfig::default())?.value;
    Ok(tv / (6.0 * kl))
}

/// Asymptotic lower bound `max(T*_KL, T*_TV / (6ε)) log(1/(3δ))` on the
/// expected stopping time of any δ-correct ε-DP strategy.
pub fn lower_bound_overlay(t_kl: f64, t_tv: f64, epsilon: f64, delta: f64) -> f64 {
    t_kl.max(t_tv / (6.0 * epsilon)) * (1.0 / (3.0 * delta)).ln()
}
