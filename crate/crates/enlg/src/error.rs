//! Error type shared across the crate.

use alloc::string::String;

use crate::sdp::SdpStatus;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is not a density operator: {0}")]
    NotDensity(String),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("size cap exceeded: needed {needed}, cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("enumeration cap exceeded: {needed} strategies, cap {cap}")]
    EnumerationCapExceeded { needed: u128, cap: u128 },

    #[error("SDP solver failed with status {0:?}")]
    SolverFailure(SdpStatus),

    #[error("theorem hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("all see-saw restarts failed")]
    AllRestartsFailed,
}
