//! Error types shared across the crate.
//!
//! Failures split into two families callers treat differently:
//!
//! * arithmetic obstructions — the inputs are well-formed but some
//!   denominator vanishes, so no exact value exists (`PoleEncountered`,
//!   `InvalidBase`, `DivisionByZero`); verification layers surface these
//!   as "inadmissible" verdicts rather than crashes;
//! * structural misuse — the inputs do not fit together
//!   (`RankMismatch`, `DomainError`, `ZeroDenominator`, `Parse`,
//!   `ChainStep`, `ExhaustedAttempts`).
//!
//! Pole errors carry a human-readable description of the vanishing
//! factor, including the cell where it occurred when one is known;
//! reports print these verbatim as admissibility witnesses.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A factor in a denominator evaluated to exactly zero, so the
    /// requested value does not exist. The payload describes the factor
    /// and, where known, the cell being evaluated.
    #[error("pole: {factor}")]
    PoleEncountered { factor: String },

    /// Zero raised to a negative power (directly, or as the base q of a
    /// negative-subscript q-shifted factorial).
    #[error("invalid base: {detail}")]
    InvalidBase { detail: String },

    /// A rational was constructed with denominator zero.
    #[error("zero denominator")]
    ZeroDenominator,

    /// Exact division by a value equal to zero.
    #[error("division by zero")]
    DivisionByZero,

    /// Two multi-indices (or an index and a parameter set) of different
    /// ranks were combined.
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    /// An index fell outside the domain it was used against, or
    /// structurally incompatible values were combined.
    #[error("domain error: {detail}")]
    DomainError { detail: String },

    /// Rejection sampling failed to find admissible parameters within
    /// the configured attempt budget.
    #[error("exhausted {attempts} sampling attempts without an admissible draw")]
    ExhaustedAttempts { attempts: u32 },

    /// A chain step failed; wraps the underlying error with the
    /// zero-based index of the offending step.
    #[error("chain step {step}: {source}")]
    ChainStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    /// Malformed textual input (rational, multi-index, flag value, or
    /// config line).
    #[error("parse error: {detail}")]
    Parse { detail: String },
}

impl Error {
    /// Prefix a pole error with the cell being evaluated; other errors
    /// pass through unchanged. Keeps witness text attached to the place
    /// it was observed.
    pub fn at_cell(self, cell: &str) -> Error {
        match self {
            Error::PoleEncountered { factor } => Error::PoleEncountered {
                factor: format!("{cell}: {factor}"),
            },
            other => other,
        }
    }
}
