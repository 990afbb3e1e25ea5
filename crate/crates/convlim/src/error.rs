use thiserror::Error;

/// Errors raised while constructing or combining the library's values.
/// Verification failures are not errors; they are reported as verdicts
/// with witnesses (see [`crate::report`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("order/partition error: {0}")]
    Order(String),

    #[error("probability space error: {0}")]
    Prob(String),

    #[error("convolution system error: {0}")]
    System(String),

    #[error("semigroup error: {0}")]
    Semigroup(String),

    #[error("description error at {path}: {message}")]
    Description { path: String, message: String },

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}
