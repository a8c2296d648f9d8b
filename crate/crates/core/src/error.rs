//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation
    /// (division by an interval containing zero, log of a nonpositive
    /// interval, exponents out of range, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated precondition on supplied data is not met (missing dominating
    /// bound, missing measure, tail start before the bound's validity onset).
    #[error("contract error: {0}")]
    Contract(String),

    /// Subdivision/refinement budget exhausted before reaching the target
    /// width.
    #[error("max refinement exceeded: {0}")]
    MaxRefinement(String),

    /// Malformed textual input (decimal or hex-float interval forms,
    /// config files).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
    pub(crate) fn refinement(msg: impl Into<String>) -> Self {
        Error::MaxRefinement(msg.into())
    }
}
