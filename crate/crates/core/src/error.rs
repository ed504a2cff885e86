use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("best arm is not unique: arms {0} and {1} share the maximum mean")]
    TiedBestArm(usize, usize),

    #[error("arm index {index} out of range for {arms} arms")]
    IndexOutOfRange { index: usize, arms: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("count must be at least 1")]
    ZeroCount,

    #[error("episode has no observations")]
    EmptyEpisode,

    #[error("suboptimal arm {0} has zero gap")]
    ZeroGap(usize),

    #[error("solver did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("grid oracle supports at most 4 arms, got {0}")]
    TooManyArms(usize),

    #[error("arm statistics are not initialised")]
    Uninitialized,

    #[error("no records for cell {0}")]
    EmptyCell(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
