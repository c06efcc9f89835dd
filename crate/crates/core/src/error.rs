use thiserror::Error;

/// Errors raised by the solver core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid signature ({p}, {q}): both p and q must be at least 1")]
    InvalidSignature { p: usize, q: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric (defect {defect:e})")]
    NotSymmetric { defect: f64 },

    #[error("Jacobi rotations did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("cannot complete a pseudo-orthogonal factor: {0}")]
    Completion(String),

    #[error("singular linear system")]
    Singular,

    #[error("all polynomial coefficients vanish")]
    ZeroPolynomial,

    #[error("negative input {value} to the {system} solver")]
    NegativeInput { system: &'static str, value: f64 },

    #[error("conserved quantity undefined: {0}")]
    ConservedUndefined(String),

    #[error("class key is inconsistent with signature: {0}")]
    InconsistentKey(String),

    #[error("oracle needs at least {min} starts, got {got}")]
    TooFewStarts { min: usize, got: usize },

    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),
}

impl Error {
    /// True for failures of the numerical machinery rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::Completion(_)
                | Error::Singular
                | Error::ConservedUndefined(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
