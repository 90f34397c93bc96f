//! Central table of numerical tolerances.
//!
//! Every check in the crate draws its threshold from here so tests and
//! operations agree on one source of truth.

/// Maximum entrywise deviation from the conjugate transpose for a matrix
/// to count as Hermitian.
pub const HERMITICITY: f64 = 1e-12;

/// Slack allowed on eigenvalues when deciding positive semidefiniteness.
pub const PSD_SLACK: f64 = 1e-9;

/// Relative error allowed when reconstructing a matrix from its spectral
/// decomposition.
pub const EIG_RECONSTRUCTION: f64 = 1e-10;

/// Orthonormality defect allowed on eigenvector Gram matrices and
/// unitarity checks.
pub const ORTHONORMALITY: f64 = 1e-10;

/// Deviation allowed on probability distributions summing to one.
pub const PROBABILITY_SUM: f64 = 1e-12;

/// Default null-space cutoff for pseudo-inverse square roots.
pub const PINV_CUTOFF: f64 = 1e-8;

/// Default relative duality-gap target for the SDP solver.
pub const SDP_GAP: f64 = 1e-8;

/// Default primal/dual feasibility target for the SDP solver.
pub const SDP_FEAS: f64 = 1e-8;

/// Tolerance on `R^2 = R` when testing whether a referee measurement is
/// projective.
pub const PROJECTIVITY: f64 = 1e-9;
