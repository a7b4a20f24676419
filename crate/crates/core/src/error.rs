use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Rejection sampling exhausted its attempt budget without producing a
    /// profile that satisfies all generation constraints.
    #[error("no feasible leg profile after {attempts} attempts")]
    InfeasibleProfile { attempts: u32 },

    #[error("angle {value} rad outside [{min}, {max}] rad")]
    AngleOutOfRange { value: f64, min: f64, max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// More than half of the requested search samples failed to generate.
    #[error("search circuit breaker: {failed} of {requested} samples failed")]
    SearchCircuitBreaker { failed: usize, requested: usize },

    /// Simulation reached a configuration the model cannot continue from
    /// (body penetrating ground, non-finite state, ...).
    #[error("simulation invalid at t={t}: {reason}")]
    SimInvalid { t: f64, reason: String },

    #[error("file format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
