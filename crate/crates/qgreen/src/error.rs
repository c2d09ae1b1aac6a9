//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by algebra kernel and channel construction routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two operands belong to different algebra contexts.
    #[error("algebra context mismatch: {0}")]
    ContextMismatch(String),

    /// A generator pair index is not present in the algebra.
    #[error("unknown generator pair index {0}")]
    UnknownPair(usize),

    /// The shift passed to the Grassmann delta is not odd-parity linear.
    #[error("delta shift must be odd-parity and linear in generators")]
    EvenParityShift,

    /// Kraus operators do not sum to the identity.
    #[error("Kraus set incomplete: max deviation from identity {deviation:.3e}")]
    IncompleteKraus { deviation: f64 },

    /// A map fails the complete-positivity test.
    #[error("map is not completely positive: min Choi eigenvalue {min_eigenvalue:.6e}")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    /// The affine T matrix must be diagonal for the canonical Green form.
    #[error("affine T matrix is not diagonal: off-diagonal magnitude {0:.3e}")]
    NonDiagonalT(f64),

    /// A matrix expected to be unitary is not.
    #[error("matrix is not unitary: max deviation {0:.3e}")]
    NotUnitary(f64),

    /// A matrix expected to be Hermitian is not.
    #[error("matrix is not Hermitian: max asymmetry {0:.3e}")]
    NotHermitian(f64),

    /// A matrix expected to be a density operator is not.
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    /// A Green kernel fails the trace-preservation invariant.
    #[error("kernel is not trace preserving: residual {0:.3e}")]
    NotTracePreserving(f64),

    /// An arccos argument exceeded [-1, 1] beyond tolerance.
    #[error("arccos argument {0} out of range beyond tolerance")]
    ArccosRange(f64),

    /// A classification identity failed to verify; indicates a convention bug.
    #[error("degradability classification failed verification: residual {residual:.3e}")]
    ClassificationFailure { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
