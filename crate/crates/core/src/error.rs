use thiserror::Error;

/// Coarse classification used by the command line to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Parse,
    Numeric,
    NonConvergence,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("newick syntax error at byte {offset}: {message}")]
    Newick { offset: usize, message: String },

    #[error("invalid forest: {0}")]
    InvalidForest(String),

    #[error("coincident leaves {0} and {1}: every edge between them has zero weight")]
    CoincidentLeaves(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{n} leaves exceeds the enumeration cap of {cap}")]
    TooManyLeaves { n: usize, cap: usize },

    #[error("matrix is not positive definite (smallest eigenvalue {0:e})")]
    NotPositiveDefinite(f64),

    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("metric is singular (condition number {0:e})")]
    SingularMetric(f64),

    #[error("point lies outside the coordinate domain: {0}")]
    OutsideDomain(String),

    #[error("did not converge: {0}")]
    NonConvergence(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Newick { .. } => ErrorKind::Parse,
            Error::InvalidForest(_) | Error::CoincidentLeaves(..) => ErrorKind::Parse,
            Error::InvalidArgument(_) | Error::TooManyLeaves { .. } => ErrorKind::Usage,
            Error::NotPositiveDefinite(_)
            | Error::NotSymmetric(_)
            | Error::SingularMetric(_)
            | Error::OutsideDomain(_) => ErrorKind::Numeric,
            Error::NonConvergence(_) => ErrorKind::NonConvergence,
        }
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
