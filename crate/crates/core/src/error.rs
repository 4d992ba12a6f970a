use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("total dimension {got} exceeds the maximum {max}")]
    SizeLimit { got: usize, max: usize },

    #[error("matrix is not Hermitian (max |m[i,j] - conj(m[j,i])| = {0:.3e})")]
    NotHermitian(f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("invalid layout: {0}")]
    Layout(String),

    #[error("state norm {0} outside the accepted window")]
    Normalization(f64),

    #[error("density matrix has a negative eigenvalue ({0:.3e})")]
    NotPositive(f64),

    #[error("invalid probability distribution: {0}")]
    Distribution(String),

    #[error("invalid ensemble: {0}")]
    Ensemble(String),

    #[error("measurement operators do not resolve the identity (max deviation {0:.3e})")]
    Povm(f64),

    #[error("operation is defined for pure states only")]
    Purity,

    #[error("wrong number of parties: {0}")]
    Arity(String),

    #[error("encoding operator is not unitary (max deviation {0:.3e})")]
    Unitarity(f64),

    #[error("parameter out of range: {0}")]
    Domain(String),

    #[error("invalid protocol: {0}")]
    Protocol(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
