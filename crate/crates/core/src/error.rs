use thiserror::Error;

/// Errors raised by the solvers, the reconstruction engine and the theory checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("Courant condition violated: dt = {dt} exceeds dx = {dx}")]
    CourantViolation { dt: f64, dx: f64 },

    #[error("series truncation needs {needed} modes but only {available} coefficients are known")]
    InsufficientModes { needed: usize, available: usize },

    #[error("coefficient decay too slow for a term-by-term series: {0}")]
    SlowCoefficientDecay(String),

    #[error("lengths are incommensurate: L/l = {ratio} has no rational form within tolerance")]
    Incommensurate { ratio: f64 },

    #[error("mode {k1} on (0, l) has no partner mode on (0, L) for L/l = {m0}/{n0}")]
    NoSharedMode { k1: u32, m0: u64, n0: u64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("forward solve failed at l = {ell}: {source}")]
    Forward {
        ell: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
