use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix entries must be finite (found NaN or infinity)")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("eigensolver failed to converge after {0} iterations")]
    ConvergenceFailure(usize),

    #[error("no real-spectrum metric: spectrum has |Im E| up to {0:.3e}")]
    ComplexSpectrum(f64),

    #[error("metric weights must all be positive")]
    NonPositiveKappa,

    #[error("elimination formulas singular: alpha = -1 or beta = -1")]
    EliminationSingular,

    #[error("singular normalization: beta = +-1")]
    SingularNormalization,

    #[error("matrix is not Hermitian within tolerance {0:.3e}")]
    NotHermitian(f64),

    #[error("matrix is not positive definite (min eigenvalue {0:.3e})")]
    NotPositiveDefinite(f64),

    #[error("no EP bracketed on [{lo}, {hi}]")]
    NoEpBracketed { lo: f64, hi: f64 },

    #[error("invalid quasi-parity {0} (must be +1 or -1)")]
    InvalidQuasiParity(i32),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("least-squares fit failed: {0}")]
    FitFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
