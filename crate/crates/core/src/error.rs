use thiserror::Error;

/// Errors raised by the exact algebra engine.
///
/// Lemma hypotheses that fail are not errors: those surface as report
/// values (`HypothesisFailure`, `NotApplicable`, ...) in the relevant module.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid order {order} for prime {prime}: order must be positive and coprime to the characteristic")]
    InvalidOrder { order: u64, prime: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource bound exceeded: {what} = {value} > {bound}")]
    Resource { what: &'static str, value: u64, bound: u64 },
    #[error("structure error: {0}")]
    Structure(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("malformed projective representation: {0}")]
    MalformedProjective(String),
    #[error("working field F_{field_size} is too small: {reason}")]
    FieldExtension { field_size: u64, reason: String },
    #[error("internal error (violates a proven statement; bug or bad input): {0}")]
    Internal(String),
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
