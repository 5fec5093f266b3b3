use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} = {value} is out of range ({expected})")]
    OutOfRange {
        what: &'static str,
        value: i64,
        expected: String,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {n} exceeds the enumeration cap {cap} (set HYPERCOVER_MAX_N to override)")]
    DimensionCap { n: usize, cap: usize },

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("empty set where a nonempty one is required: {0}")]
    EmptySet(&'static str),

    #[error("{0} is not a prime in the supported range")]
    NotPrime(u64),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("hypothesis fails: {0}")]
    Hypothesis(String),

    /// A theorem-guaranteed object was not found after verified hypotheses;
    /// this indicates an arithmetic bug, not a counterexample.
    #[error("search exhausted despite verified hypotheses: {0}")]
    Exhausted(String),

    /// A proven inequality was violated by a verified certificate; same meaning
    /// as [`Error::Exhausted`].
    #[error("bound violated: {0}")]
    BoundViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(what: &'static str, value: impl TryInto<i64>, expected: impl Into<String>) -> Error {
    Error::OutOfRange {
        what,
        value: value.try_into().unwrap_or(i64::MAX),
        expected: expected.into(),
    }
}
