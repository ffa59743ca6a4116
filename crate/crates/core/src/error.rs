use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no connected graph after {attempts} attempts")]
    Generation { attempts: u32 },

    /// The linear fixed point does not exist for these rates.
    #[error("unstable parameters: stability margin {margin} is not positive")]
    Unstable { margin: f64 },

    #[error("content production diverged at step {step}")]
    Divergent { step: usize },

    #[error("fixed-point iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("malformed input: {0}")]
    Parse(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
