//! Correlation-structure analysis for finite-dimensional bipartite quantum
//! states.
//!
//! The crate decides where a density matrix sits on the chain
//!
//! > product ⊂ zero minimal-disturbance ⊂ classical–quantum ⊂
//! > strongly PPT-preserving factorization ⊂ separable ⊂ PPT,
//!
//! computes the variational correlation measures attached to that chain
//! (minimal measurement disturbance, geometric discord, entropic discord),
//! and — where the block factorization succeeds — constructs an explicit
//! separable ensemble for the state.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std` feature
//! only forwards to the numeric dependencies' own `std` features.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod classify;
pub mod criteria;
pub mod eig;
pub mod error;
pub mod matrix;
pub mod measures;
pub mod sampling;
pub mod simdiag;
pub mod sppt;
pub mod state;
pub mod tol;

pub use classify::{
    classify, ClassificationReport, ClassifyOpts, EntangledReason, Evidence, FlagEvidence,
    MeasureSummary, SeparabilityCall, SeparableReason, TriState,
};
pub use criteria::{
    eigenspace_decomposition, is_cq, is_ppt, is_product, is_qc, is_zero_min_a, is_zero_min_b,
    marginal_commutes_a, marginal_commutes_b, product_residual, CqWitness,
    EigenspaceDecomposition, PptWitness, ZeroMinWitness,
};
pub use eig::{
    cluster_by_gap, herm_eig, herm_eig_with, operator_norm, pseudo_inverse,
    pseudo_inverse_with_rank, psd_sqrt, psd_sqrt_with, singular_values, trace_norm, HermEigen,
};
pub use error::{CriteriaError, Error, LinalgError, MeasureError, SpptError, StateError};
pub use matrix::{c64, ComplexMatrix};
pub use measures::{
    apply_measurement_a, apply_measurement_b, discord_a, discord_b, gmqd_a, gmqd_b,
    min_a, min_b, min_pure, mutual_information, von_neumann_entropy, Certificate, MeasureOpts,
    MeasureResult, Measurement,
};
pub use sampling::{random_density, random_unitary, rng_from_seed};
pub use sppt::{
    block_cholesky, extract_from_factor, extract_separable_ensemble, is_sppt, is_ssppt,
    random_ssppt_state, separability_2xn, support_normalize, BlockCholeskyFactor, EnsembleTerm,
    SeparabilityRoute, SeparabilityVerdict, SeparableEnsemble, Side, SspptReport,
};
pub use state::{
    make_block_contraction, make_circulant, make_cq, make_diag_coherence, make_product, make_qc,
    make_pure_schmidt, random_state, BipartiteState, PureState,
};
pub use simdiag::{
    commutator_norm, is_normal, normality_residual, simultaneous_diagonalize, SimDiagOpts,
};
