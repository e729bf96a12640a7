use thiserror::Error;

/// Errors shared by all modules. Each variant carries a stable
/// machine-readable code used by the CLI report format.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("matrix is not hermitian within tolerance")]
    NotHermitian,
    #[error("matrix is not positive definite")]
    NotPositive,
    #[error("matrix is singular within tolerance")]
    Singular,
    #[error("Q·conj(Q) is not a real nonzero scalar matrix")]
    NotScalarQQbar,
    #[error("odd size with negative scalar Q·conj(Q); input is corrupted")]
    OddNegative,
    #[error("spectrum of |Q| violates the mu/mu^-1 pairing")]
    PairingViolation,
    #[error("descriptor equation residual exceeds tolerance")]
    EquationResidual,
    #[error("fundamental dimension must be at least 2")]
    BadN,
    #[error("comparison is undecidable (degenerate stabilizer search gave up)")]
    Undecidable,
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("ambiguous angle clustering: {0}")]
    AmbiguousClustering(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidMatrix(_) => "invalid_matrix",
            Error::NotHermitian => "not_hermitian",
            Error::NotPositive => "not_positive",
            Error::Singular => "singular",
            Error::NotScalarQQbar => "not_scalar_qqbar",
            Error::OddNegative => "odd_negative",
            Error::PairingViolation => "pairing_violation",
            Error::EquationResidual => "equation_residual",
            Error::BadN => "bad_n",
            Error::Undecidable => "undecidable",
            Error::UnsupportedInput(_) => "unsupported_input",
            Error::AmbiguousClustering(_) => "ambiguous_clustering",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
