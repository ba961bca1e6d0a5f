//! Crate-wide error type.
//!
//! The three variants mirror the process-level exit discipline of the CLI:
//! domain/precondition problems exit 1, configuration problems exit 2.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AxiError {
    /// A point or region lies outside the validity domain of a field or chart.
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// A documented operation precondition was violated by the inputs.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Malformed configuration (unknown keys, non-finite numbers, bad ranges).
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical step failed (non-finite sample, no bracket, ...).
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, AxiError>;
