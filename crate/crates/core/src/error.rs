use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown knot '{0}'")]
    UnknownKnot(String),

    #[error("input is not a knot presentation: {0}")]
    NotAKnot(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("non-free invariant submodule: {0}")]
    NonFreeModule(String),

    #[error("singular restriction: {0}")]
    SingularRestriction(String),

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("order search exceeded cap of {cap} iterations")]
    OrderCapExceeded { cap: u64 },

    #[error("state space of {required} states exceeds the cap of {cap}")]
    SizeCapExceeded { required: u128, cap: u128 },

    #[error("group spec repeats the prime {0}; covering classification needs pairwise-distinct primes")]
    RepeatedPrime(u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that signal a broken structural guarantee rather than
    /// bad input: the CLI maps these to its theorem-violation exit code.
    pub fn is_theorem_violation(&self) -> bool {
        matches!(
            self,
            Error::HypothesisViolated(_)
                | Error::TheoremViolation(_)
                | Error::SingularRestriction(_)
        )
    }
}
