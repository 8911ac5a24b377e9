use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Structural violation: non-Hermitian N, asymmetric M or sigma, bad shapes.
    #[error("malformed state: {0}")]
    MalformedState(String),

    #[error("unphysical state: min_eig = {min_eig:.6e} (smallest eigenvalue of sigma + (i/2)Omega)")]
    Unphysical { min_eig: f64 },

    #[error("dimension mismatch: expected {expected} modes, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    /// Symplectic spectrum does not come in +/- pairs.
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    /// Negative radicand beyond the clamping tolerance.
    #[error("numerical domain error: {0}")]
    NumericalDomain(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
