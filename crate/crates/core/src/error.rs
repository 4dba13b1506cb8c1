use thiserror::Error;

/// Errors produced by the library.
///
/// Axiom failures are never errors on their own: checkers return residuals.
/// An error means an operation could not be carried out (shape or ring
/// mismatch, unmet theorem hypothesis, malformed input).
#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("missing weak unit: {0}")]
    MissingWeakUnit(String),

    /// A theorem hypothesis did not hold. `residual` is absent when the
    /// hypothesis is not measured as a residual (e.g. invertibility).
    #[error("hypothesis violated: {hypothesis}{}", measured(*residual, *tolerance))]
    Hypothesis {
        hypothesis: String,
        residual: Option<f64>,
        tolerance: f64,
    },

    /// A constructed object failed re-verification.
    #[error("output verification failed for {what}: {detail}")]
    Verification { what: String, detail: String },

    #[error("too large: {0}")]
    TooLarge(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

fn measured(residual: Option<f64>, tolerance: f64) -> String {
    match residual {
        Some(r) => format!(" (residual {r:.3e}, tolerance {tolerance:.1e})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn hypothesis(
        hypothesis: impl Into<String>,
        residual: Option<f64>,
        tolerance: f64,
    ) -> Self {
        Error::Hypothesis {
            hypothesis: hypothesis.into(),
            residual,
            tolerance,
        }
    }

    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}
