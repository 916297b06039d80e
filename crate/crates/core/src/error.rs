//! Error type shared by all engines.

use thiserror::Error;

/// Everything that can go wrong while computing a Hurwitz number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HurwitzError {
    /// A search exceeded its configured budget. `module` names the engine
    /// that tripped so callers can report it.
    #[error("budget exceeded in {module}: {detail}")]
    BudgetExceeded { module: &'static str, detail: String },

    /// Malformed input text or invalid partition data.
    #[error("parse error: {0}")]
    Parse(String),

    /// The engine does not apply to the requested type (for example a
    /// tropical count with no branch points).
    #[error("engine not applicable: {0}")]
    Inapplicable(String),

    /// Interpolation points did not determine the polynomial.
    #[error("singular interpolation system: {0}")]
    SingularSystem(String),

    /// A held-out point disagreed with the fitted polynomial.
    #[error("fit mismatch: {0}")]
    FitMismatch(String),

    /// A combinatorial type has a non-positive edge weight at the point.
    #[error("type not realized at this point: {0}")]
    TypeNotRealized(String),

    /// Filesystem trouble with the memo cache or exports.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for HurwitzError {
    fn from(e: std::io::Error) -> Self {
        HurwitzError::Io(e.to_string())
    }
}

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, HurwitzError>;
