use thiserror::Error;

use crate::exact::LogModel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("Bloch vector ({x}, {y}, {z}) is not on the unit sphere")]
    InvalidBlochVector { x: f64, y: f64, z: f64 },

    #[error("Pauli spectrum requires a qubit register; use the Weyl-Heisenberg path for local dimension {0}")]
    UseWeylPath(usize),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("invalid Renyi order {0}")]
    InvalidOrder(f64),

    #[error("observable is not Hermitian (max deviation {0:e})")]
    InvalidObservable(f64),

    #[error("invalid spectrum: lower eigenvalue {a1} must be below upper eigenvalue {a2}")]
    InvalidSpectrum { a1: f64, a2: f64 },

    #[error("invalid tolerance {0:e}")]
    InvalidTolerance(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The density diverges at `at`. When the divergence is logarithmic the
    /// asymptotic model is attached so callers can still plot nearby.
    #[error("density is singular at {at}")]
    SingularPoint { at: f64, model: Option<LogModel> },

    #[error("not implemented: {0}")]
    NotImplemented(String),

    #[error("histogram edges must be strictly increasing with at least two entries")]
    InvalidEdges,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    /// A sample fell outside the exact support of its measure.
    #[error("sample {value} outside the exact support [{lo}, {hi}] of {measure}")]
    SupportViolation {
        measure: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("quadrature did not converge: estimated error {error:e} above tolerance {tol:e}")]
    QuadratureFailure { error: f64, tol: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}
