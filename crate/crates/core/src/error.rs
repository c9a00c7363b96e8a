use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("incompatible data: {}", .0.join("; "))]
    Compatibility(Vec<String>),

    #[error("parameter gate refused the run: {0}")]
    Gate(String),

    #[error("Picard iteration did not converge in {iterations} iterations (last residual {residual:.3e}); try a smaller window_T")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("window floor {floor:.3e} reached at t = {t:.6} without convergence (last residual {residual:.3e})")]
    WindowFloor { t: f64, floor: f64, residual: f64 },

    #[error("frequency grid leaves {fraction:.3e} of the symbol mass in its last decile (tolerance {tol:.1e})")]
    Bandwidth { fraction: f64, tol: f64 },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("unknown probe combination: {0}")]
    Registry(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("truncation error: {0}")]
    Truncation(String),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

/// Non-fatal condition attached to a result.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Last retained term of a modal series is not negligible.
    TailNotConverged { last_term: f64, partial_sum: f64 },
    /// Mass close to the edge of a periodic computational line.
    NearTruncation { fraction: f64 },
    /// Zero-extension of boundary data has a jump at an endpoint.
    NonzeroEndpoint { t: f64, value: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::TailNotConverged { last_term, partial_sum } => write!(
                f,
                "modal tail not converged: last term {last_term:.3e} vs partial sum {partial_sum:.3e}"
            ),
            Warning::NearTruncation { fraction } => {
                write!(f, "{fraction:.3e} of the mass lies near the truncation boundary")
            }
            Warning::NonzeroEndpoint { t, value } => write!(
                f,
                "boundary data is {value:.3e} at t = {t}; zero-extension norms of order >= 1/2 are large"
            ),
        }
    }
}

/// A value together with the warnings produced while computing it.
#[derive(Debug, Clone)]
pub struct Annotated<T> {
    pub value: T,
    pub warnings: Vec<Warning>,
}

impl<T> Annotated<T> {
    pub fn clean(value: T) -> Self {
        Self { value, warnings: Vec::new() }
    }
}
