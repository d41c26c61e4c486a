//! Default numerical tolerances.
//!
//! Every predicate in the crate accepts an explicit tolerance; these are the
//! defaults used by the convenience entry points. Residuals are always scaled
//! before comparison — a residual `r` measured on operators `P, Q` is compared
//! as `r / max(1, ‖P‖·‖Q‖)` so the same constant works across magnitudes.

/// Accepted scaled hermiticity residual when validating operator inputs.
pub const HERMITICITY: f64 = 1e-9;

/// Most negative scaled eigenvalue still treated as zero in PSD checks.
pub const POSITIVITY: f64 = 1e-9;

/// Accepted scaled commutator / normality residual in structure predicates.
pub const COMMUTATIVITY: f64 = 1e-8;

/// Accepted scaled residual when checking block factorizations and the
/// partial-transpose identities built from them.
pub const FACTORIZATION: f64 = 1e-8;

/// Gap under which two mixing weights are treated as equal when grouping
/// eigenvalues of a reduced state into degenerate clusters.
pub const WEIGHT_CLUSTER_GAP: f64 = 1e-7;

/// Gap under which two eigenvalues are treated as degenerate by the
/// eigensolver's deterministic re-basis step.
pub const EIGEN_CLUSTER_GAP: f64 = 1e-9;

/// Relative singular-value cutoff used for numerical rank decisions.
pub const RANK_CUTOFF: f64 = 1e-7;

/// Scaled off-diagonal mass at which Jacobi sweeps stop.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-13;

/// Weights below this floor are treated as absent when normalizing
/// conditional states out of a decomposition.
pub const WEIGHT_FLOOR: f64 = 1e-12;

/// Accepted deviation of a density matrix trace from one.
pub const TRACE: f64 = 1e-9;
