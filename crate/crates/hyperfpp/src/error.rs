use thiserror::Error;

/// Errors shared across the geometry, solver and analytics modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation for n={n}: {reason}")]
    InvalidPermutation { n: u32, reason: &'static str },

    /// A parameter is outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested dimension exceeds a configured resource limit.
    #[error("n={n} exceeds the {what} limit of {cap}: {detail}")]
    Resource {
        what: &'static str,
        n: u32,
        cap: u32,
        detail: String,
    },

    #[error("first and last directions of a middle constraint must differ (both {0})")]
    EqualConstraintDirs(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
