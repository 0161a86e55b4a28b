use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The characteristic is not a prime number.
    #[error("p = {p} is not prime")]
    NotPrime { p: u64 },

    /// The characteristic exceeds the degree of the symmetric group. In that
    /// regime the group has no elements of order p and the invariant
    /// degenerates, so we refuse rather than pick a convention.
    #[error("prime p = {p} exceeds the degree n = {n}")]
    PrimeTooLarge { p: u64, n: u64 },

    /// Not a valid two-part partition.
    #[error("invalid partition: {reason}")]
    InvalidPartition { reason: String },

    /// An exhaustive enumeration would exceed the configured budget.
    #[error("instance too large: {required} objects exceed the enumeration budget {budget}")]
    InstanceTooLarge { required: u128, budget: u64 },

    /// Identity name not recognised by the verification suite.
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    /// Identity parameters violate the identity's hypotheses.
    #[error("parameters outside the identity's domain: {0}")]
    ParamsOutOfDomain(String),

    /// Dividing an orbit count by p^d left a remainder. This signals an
    /// implementation bug, never an expected condition.
    #[error("non-integral multiplicity for signature of size {d}: {numerator} is not divisible by {divisor}")]
    NonIntegralMultiplicity {
        d: u32,
        numerator: String,
        divisor: String,
    },

    /// An internal cross-check between two routes failed.
    #[error("self-check failed: {0}")]
    SelfCheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
