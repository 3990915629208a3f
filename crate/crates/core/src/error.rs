use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    /// The closed-form solution ceases to exist (I(x) <= 0).
    #[error("solution breaks down before x = {x} (gradient catastrophe at x* = {x_star})")]
    Breakdown { x: f64, x_star: f64 },

    /// The ODE integrator could not meet its tolerances.
    #[error("integration failed at x = {x}: {reason}")]
    Solver { x: f64, reason: String },

    /// Shock fitting found no admissible root.
    #[error("shock fitting failed at x = {x}: {reason}")]
    Fitting { x: f64, reason: String },

    /// An internal consistency check failed.
    #[error("consistency violated: {0}")]
    Consistency(String),

    /// Sound speed would vanish (u <= -2/(γ-1)).
    #[error("vacuum state reached for u = {u}")]
    Vacuum { u: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
