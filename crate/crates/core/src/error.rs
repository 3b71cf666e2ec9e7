//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("map is not completely positive (Choi min eigenvalue {min_eigenvalue:.3e})")]
    NotCp { min_eigenvalue: f64 },

    #[error("map is not unital (residual {residual:.3e})")]
    NotUnital { residual: f64 },

    #[error("channel is not covariant under the given representation (residual {residual:.3e})")]
    NotCovariant { residual: f64 },

    #[error("no ancilla representation solves the intertwining system (residual {residual:.3e})")]
    NoAncillaRep { residual: f64 },

    #[error("pairs are not unitarily equivalent (trivial intertwining kernel)")]
    NotEquivalent,

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("basis is not orthonormal (residual {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    #[error("point is off the orbit (deviation {deviation:.3e})")]
    OffOrbit { deviation: f64 },

    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix entries must be finite")]
    NonFinite,
}

pub type Result<T> = std::result::Result<T, Error>;
