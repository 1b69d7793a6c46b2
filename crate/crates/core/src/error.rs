use thiserror::Error;

use crate::exactlp::QVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Ordering-cone axiom failures, each with an exact witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("Trivial: the cone is {{0}}")]
    Trivial,
    #[error("NotPointed: the cone contains the line through {line}")]
    NotPointed { line: QVector },
    #[error("EmptyInterior: the cone lies in the hyperplane with normal {normal}")]
    EmptyInterior { normal: QVector },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("malformed rational: {0:?}")]
    MalformedRational(String),
    #[error("decimal number not accepted on the certificate path: {0:?}")]
    DecimalNotAccepted(String),
    #[error("invalid ordering cone: {0}")]
    InvalidCone(#[from] ConeError),
    #[error("capability: {0}")]
    Capability(String),
    #[error("candidate point is infeasible: {0}")]
    InfeasibleCandidate(String),
    #[error("invalid instance: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by the input document rather than by a limit
    /// of the tool or a bug.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Dimension(_)
                | Error::MalformedRational(_)
                | Error::DecimalNotAccepted(_)
                | Error::InvalidCone(_)
                | Error::InfeasibleCandidate(_)
                | Error::Parse(_)
        )
    }
}
