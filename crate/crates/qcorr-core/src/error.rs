//! Error types for the analysis kernel.
//!
//! Each layer gets its own enum so callers can match on exactly the failures
//! that layer can produce; the crate-wide [`Error`] aggregates them for
//! high-level entry points such as [`crate::classify::classify`].

use alloc::string::String;
use core::fmt;

/// Failures of the dense linear-algebra kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    /// Operation requires a square matrix.
    NonSquare { rows: usize, cols: usize },
    /// Operand shapes are incompatible.
    ShapeMismatch {
        rows_a: usize,
        cols_a: usize,
        rows_b: usize,
        cols_b: usize,
    },
    /// Input was expected to be Hermitian; `residual` is the Frobenius norm
    /// of `M − M†`.
    NotHermitian { residual: f64 },
    /// Input was expected to be positive semidefinite.
    NotPsd { min_eigenvalue: f64 },
    /// Iterative routine failed to reach its tolerance.
    NoConvergence { sweeps: usize },
    /// A family passed to the joint diagonalizer is not commuting normal;
    /// `residual` is the worst scaled commutator norm found.
    NotCommutingFamily { residual: f64 },
    /// Index exceeds the dimension it addresses.
    IndexOutOfRange { index: usize, bound: usize },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            Self::ShapeMismatch {
                rows_a,
                cols_a,
                rows_b,
                cols_b,
            } => write!(
                f,
                "incompatible shapes {rows_a}x{cols_a} and {rows_b}x{cols_b}"
            ),
            Self::NotHermitian { residual } => {
                write!(f, "matrix is not Hermitian (residual {residual:.3e})")
            }
            Self::NotPsd { min_eigenvalue } => write!(
                f,
                "matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})"
            ),
            Self::NoConvergence { sweeps } => {
                write!(f, "iteration did not converge within {sweeps} sweeps")
            }
            Self::NotCommutingFamily { residual } => write!(
                f,
                "family is not commuting normal (worst residual {residual:.3e})"
            ),
            Self::IndexOutOfRange { index, bound } => {
                write!(f, "index {index} out of range (bound {bound})")
            }
        }
    }
}

impl core::error::Error for LinalgError {}

/// Failures while building or validating bipartite states.
#[derive(Debug, Clone, PartialEq)]
pub enum StateError {
    /// Matrix size does not equal `dim_a * dim_b` (or inputs disagree in length).
    ShapeMismatch { expected: usize, got: usize },
    /// Matrix is not a positive operator within tolerance (this also covers
    /// inputs whose hermiticity residual is too large to symmetrize away).
    NotPositive { min_eigenvalue: f64 },
    /// Trace differs from one beyond tolerance.
    TraceNotOne { trace: f64 },
    /// Columns supplied as a basis are not orthonormal; `residual` is the
    /// Frobenius norm of `K†K − I`.
    NotOrthonormal { residual: f64 },
    /// Mixing weights are negative or do not sum to one.
    BadProbabilities { sum: f64, min: f64 },
    /// A conditional state in a constructor is not a valid density matrix.
    BadSigma { index: usize, detail: String },
    /// A matrix required to be a contraction has operator norm above one.
    NotContraction { norm: f64 },
    /// A matrix required to be PSD is not.
    NotPsd { min_eigenvalue: f64 },
    /// Schmidt coefficients are not normalized (or not positive/descending).
    BadNormalization { detail: String },
    /// Requested rank is zero or exceeds the total dimension.
    BadRank { rank: usize, max: usize },
    /// Block or basis index out of range.
    IndexOutOfRange { index: usize, bound: usize },
    /// Entries must all be finite.
    NotFinite,
    /// Numerical failure bubbled up from the kernel.
    Numeric(LinalgError),
}

impl fmt::Display for StateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ShapeMismatch { expected, got } => {
                write!(f, "expected dimension {expected}, got {got}")
            }
            Self::NotPositive { min_eigenvalue } => write!(
                f,
                "matrix is not a positive operator (min eigenvalue {min_eigenvalue:.3e})"
            ),
            Self::TraceNotOne { trace } => write!(f, "trace is {trace:.12}, expected 1"),
            Self::NotOrthonormal { residual } => {
                write!(f, "columns are not orthonormal (residual {residual:.3e})")
            }
            Self::BadProbabilities { sum, min } => write!(
                f,
                "weights must be nonnegative and sum to one (sum {sum:.12}, min {min:.3e})"
            ),
            Self::BadSigma { index, detail } => {
                write!(f, "conditional state {index} is invalid: {detail}")
            }
            Self::NotContraction { norm } => {
                write!(f, "matrix is not a contraction (operator norm {norm:.6})")
            }
            Self::NotPsd { min_eigenvalue } => write!(
                f,
                "matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})"
            ),
            Self::BadNormalization { detail } => write!(f, "bad Schmidt vector: {detail}"),
            Self::BadRank { rank, max } => {
                write!(f, "rank {rank} out of range 1..={max}")
            }
            Self::IndexOutOfRange { index, bound } => {
                write!(f, "index {index} out of range (bound {bound})")
            }
            Self::NotFinite => write!(f, "matrix entries must be finite"),
            Self::Numeric(e) => write!(f, "numerical failure: {e}"),
        }
    }
}

impl core::error::Error for StateError {}

impl From<LinalgError> for StateError {
    fn from(e: LinalgError) -> Self {
        Self::Numeric(e)
    }
}

/// Failures of the structure predicates.
#[derive(Debug, Clone, PartialEq)]
pub enum CriteriaError {
    /// A recovered decomposition failed to rebuild the input within ten times
    /// the tolerance; the witness is unreliable and must not be used.
    ReconstructionFailed { residual: f64 },
    /// Numerical failure bubbled up from the kernel.
    Numeric(LinalgError),
}

impl fmt::Display for CriteriaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ReconstructionFailed { residual } => write!(
                f,
                "recovered decomposition does not rebuild the state (residual {residual:.3e})"
            ),
            Self::Numeric(e) => write!(f, "numerical failure: {e}"),
        }
    }
}

impl core::error::Error for CriteriaError {}

impl From<LinalgError> for CriteriaError {
    fn from(e: LinalgError) -> Self {
        Self::Numeric(e)
    }
}

/// Failures of the block-triangular factorization layer.
#[derive(Debug, Clone, PartialEq)]
pub enum SpptError {
    /// A Schur-complement residual dipped below `-tol`: a numerical failure,
    /// since validated states keep every residual positive semidefinite.
    NotPsdResidual { row: usize, min_eigenvalue: f64 },
    /// The assembled factor does not rebuild its target within tolerance.
    ReconstructionFailed { residual: f64 },
    /// The state is not SSPPT for the requested side, so the requested
    /// construction is unavailable; `residual` is the worst violation.
    NotSsppt { residual: f64 },
    /// Operation requires one factor of dimension two.
    WrongShape { dim_a: usize, dim_b: usize },
    /// Numerical failure bubbled up from the kernel.
    Numeric(LinalgError),
}

impl fmt::Display for SpptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotPsdResidual {
                row,
                min_eigenvalue,
            } => write!(
                f,
                "Schur complement at block row {row} is not PSD (min eigenvalue {min_eigenvalue:.3e})"
            ),
            Self::ReconstructionFailed { residual } => write!(
                f,
                "factor does not rebuild the state (residual {residual:.3e})"
            ),
            Self::NotSsppt { residual } => write!(
                f,
                "state is not SSPPT for this side (worst violation {residual:.3e})"
            ),
            Self::WrongShape { dim_a, dim_b } => write!(
                f,
                "operation requires a factor of dimension two, got {dim_a}x{dim_b}"
            ),
            Self::Numeric(e) => write!(f, "numerical failure: {e}"),
        }
    }
}

impl core::error::Error for SpptError {}

impl From<LinalgError> for SpptError {
    fn from(e: LinalgError) -> Self {
        Self::Numeric(e)
    }
}

/// Failures of the correlation measures.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureError {
    /// Measurement dimension does not match the measured factor.
    ShapeMismatch { expected: usize, got: usize },
    /// The entropic optimizer is only supported up to this dimension.
    UnsupportedDimension { dim: usize, max: usize },
    /// Input was expected to be PSD.
    NotPsd { min_eigenvalue: f64 },
    /// Input was expected to have unit trace.
    TraceNotOne { trace: f64 },
    /// Supplied basis is not unitary; `residual` is the Frobenius norm of
    /// `U†U − I`.
    NotUnitary { residual: f64 },
    /// Numerical failure bubbled up from the kernel.
    Numeric(LinalgError),
}

impl fmt::Display for MeasureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ShapeMismatch { expected, got } => {
                write!(f, "measurement dimension {got} does not match factor {expected}")
            }
            Self::UnsupportedDimension { dim, max } => {
                write!(f, "dimension {dim} unsupported (max {max})")
            }
            Self::NotPsd { min_eigenvalue } => write!(
                f,
                "matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})"
            ),
            Self::TraceNotOne { trace } => write!(f, "trace is {trace:.12}, expected 1"),
            Self::NotUnitary { residual } => {
                write!(f, "basis is not unitary (residual {residual:.3e})")
            }
            Self::Numeric(e) => write!(f, "numerical failure: {e}"),
        }
    }
}

impl core::error::Error for MeasureError {}

impl From<LinalgError> for MeasureError {
    fn from(e: LinalgError) -> Self {
        Self::Numeric(e)
    }
}

/// Crate-wide aggregate used by the classifier entry point.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    Linalg(LinalgError),
    State(StateError),
    Criteria(CriteriaError),
    Sppt(SpptError),
    Measure(MeasureError),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linalg(e) => write!(f, "{e}"),
            Self::State(e) => write!(f, "{e}"),
            Self::Criteria(e) => write!(f, "{e}"),
            Self::Sppt(e) => write!(f, "{e}"),
            Self::Measure(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for Error {}

impl From<LinalgError> for Error {
    fn from(e: LinalgError) -> Self {
        Self::Linalg(e)
    }
}
impl From<StateError> for Error {
    fn from(e: StateError) -> Self {
        Self::State(e)
    }
}
impl From<CriteriaError> for Error {
    fn from(e: CriteriaError) -> Self {
        Self::Criteria(e)
    }
}
impl From<SpptError> for Error {
    fn from(e: SpptError) -> Self {
        Self::Sppt(e)
    }
}
impl From<MeasureError> for Error {
    fn from(e: MeasureError) -> Self {
        Self::Measure(e)
    }
}
