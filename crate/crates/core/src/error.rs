use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped by the exit-code contract of the CLI: input and
/// parse problems map to exit code 2, numerical and identifiability
/// failures to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    /// A value lies outside the declared validity window of a model.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// Evaluation at a mathematical singularity (e.g. a Sellmeier pole).
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed or inconsistent caller input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Not enough samples to determine the requested quantity.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A fit or derivative is numerically ill-conditioned.
    #[error("numerical conditioning: {0}")]
    Conditioning(String),

    /// Nonlinear fit did not converge within the iteration bound.
    #[error("fit failed after {iterations} iterations, last rms {last_rms:.3e}")]
    FitFailure { iterations: usize, last_rms: f64 },

    /// The requested fit window contains no resonance dip.
    #[error("no resonance found in window")]
    NoResonance,

    /// The model is being evaluated outside its validity regime
    /// (e.g. pump power at or above the OPO threshold).
    #[error("regime error: {0}")]
    Regime(String),

    /// Parameters of a fit cannot be separated from the provided data.
    #[error("identifiability error: {0}")]
    Identifiability(String),

    /// A counting statistic is undefined for the given streams.
    #[error("undefined statistic: {0}")]
    UndefinedStatistic(String),

    /// Quadrature error estimate exceeds the requested precision.
    #[error("precision error: {0}")]
    Precision(String),

    /// CSV/JSON parse failure, with a line number when known.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// `true` for errors caused by caller input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::OutOfRange(_)
                | Error::Domain(_)
                | Error::InvalidInput(_)
                | Error::Parse { .. }
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
