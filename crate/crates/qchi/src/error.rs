//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while validating inputs or running a solver.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix that must be square is not.
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// Hermiticity check failed: ‖M − M†‖ exceeded the tolerance.
    #[error("matrix is not Hermitian (deviation {deviation:.3e} > tol {tol:.3e})")]
    NotHermitian { deviation: f64, tol: f64 },

    /// Positive semidefiniteness check failed.
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.3e} < -tol {tol:.3e})")]
    NotPsd { min_eig: f64, tol: f64 },

    /// Trace differs from the required value.
    #[error("trace must be {expected} (got {got:.12}, tol {tol:.3e})")]
    BadTrace { expected: f64, got: f64, tol: f64 },

    /// A vector that must be normalized is not.
    #[error("vector is not normalized (norm {norm:.12})")]
    NotNormalized { norm: f64 },

    /// Kraus family does not sum to the identity: Σ K†K ≠ I.
    #[error("Kraus operators are not trace preserving (deviation {deviation:.3e} > tol {tol:.3e})")]
    NotTracePreserving { deviation: f64, tol: f64 },

    /// An empty collection where at least one element is required.
    #[error("empty {what}: at least one element is required")]
    Empty { what: &'static str },

    /// Ensemble weights must be positive and sum to one.
    #[error("ensemble weights invalid: {detail}")]
    BadWeights { detail: String },

    /// Energy constraint cannot be met (below the ground energy, or malformed).
    #[error("infeasible constraint: {detail}")]
    InfeasibleConstraint { detail: String },

    /// A matrix expected to be an orthogonal projector is not.
    #[error("matrix is not a projector (‖P² − P‖ = {deviation:.3e})")]
    NotAProjector { deviation: f64 },

    /// The anchor state of a truncation channel must live inside the retained subspace.
    #[error("anchor state leaks outside the retained subspace (leak {leak:.3e})")]
    AnchorOutsideSubspace { leak: f64 },

    /// Classical-quantum degrading construction needs pairwise orthogonal output supports.
    #[error("output supports overlap (pair {i},{j}: overlap {overlap:.3e}); degrading map needs orthogonal supports")]
    OverlappingSupports { i: usize, j: usize, overlap: f64 },

    /// A solver failed to converge within its iteration budget.
    #[error("solver did not converge: {detail}")]
    NoConvergence { detail: String },

    /// Gaussian specification is malformed (shape or symmetry).
    #[error("invalid Gaussian channel specification: {detail}")]
    BadGaussianSpec { detail: String },

    /// Input file or preset could not be understood.
    #[error("invalid input: {detail}")]
    BadInput { detail: String },

    /// Unsupported schema version in a JSON document.
    #[error("unsupported schema version {got} (this build reads schema {supported})")]
    BadSchema { got: u32, supported: u32 },

    /// I/O failure while reading or writing files.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// TOML configuration parse failure.
    #[error("config error: {0}")]
    Config(#[from] toml::de::Error),
}
