use thiserror::Error;

use crate::spectrahedron::MembershipReport;

/// Errors raised by the library.
///
/// Variants split into two families: shape/parse problems (caller errors) and
/// domain violations (the input is well formed but outside the mathematical
/// contract, e.g. a matrix that is not PSD). [`Error::is_domain`] tells them apart.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not positive semidefinite (most negative eigenvalue {min_eigenvalue:e}, tolerance {tol:e})")]
    NotPsd { min_eigenvalue: f64, tol: f64 },

    #[error("point is not feasible (psd violation {:e}, max residual {:e})", .0.psd_violation, .0.max_residual())]
    Infeasible(Box<MembershipReport>),

    #[error("eigen-solver did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that reflect a mathematical precondition failure rather
    /// than malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::NotPsd { .. } | Error::Infeasible(_) | Error::NonConvergence { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
