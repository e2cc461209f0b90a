use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: argument out of domain: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("{op}: no convergence after {terms} terms")]
    NonConvergent { op: &'static str, terms: usize },

    #[error("{op}: result overflows f64")]
    Overflow { op: &'static str },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    /// Name of the operation that failed, when there is one.
    pub fn operation(&self) -> Option<&'static str> {
        match self {
            Error::Domain { op, .. } | Error::NonConvergent { op, .. } | Error::Overflow { op } => Some(op),
            Error::UnknownIdentity(_) => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
