//! Fixed-confidence best-arm identification under ε-global differential privacy.
//!
//! The crate is organised bottom-up:
//!
//! - [`bandit`]: Bernoulli instances, gaps and seeded reward streams.
//! - [`divergence`]: Bernoulli KL/TV and the Gaussian transportation statistics.
//! - [`privacy`]: the Laplace mechanism and per-arm episode accumulators.
//! - [`zeta`] and [`threshold`]: GLR stopping thresholds, private and non-private.
//! - [`chartime`]: solvers for the lower-bound characteristic times.
//! - [`algorithms`]: AdaP-TT (private and non-private), TTUCB and DP-SE.
//! - [`harness`]: seeded parallel sweeps, summaries and audits.

pub mod algorithms;
pub mod bandit;
pub mod chartime;
pub mod divergence;
mod error;
pub mod harness;
pub mod privacy;
pub mod threshold;
pub mod zeta;

pub use error::{Error, Result};

pub use algorithms::{Algorithm, RunConfig, RunResult};
pub use bandit::{BanditInstance, GapVector, RngStream};
pub use chartime::{Allocation, CharTimeReport, SolverKind};
pub use threshold::ThresholdParams;
