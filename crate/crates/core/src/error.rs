use thiserror::Error;

/// Errors raised by the equilibrium engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// A parameter lies outside its admissible domain.
    #[error("invalid parameter `{field}` = {value}: {reason}")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A population-density locus does not exist for this environment.
    #[error("locus `{locus}` is undefined: {reason}")]
    ThresholdUndefined {
        locus: &'static str,
        reason: &'static str,
    },

    /// Marginal products are unbounded at a corner allocation.
    #[error("degenerate allocation (t = {t}, l = {l}): {reason}")]
    Degenerate {
        t: f64,
        l: f64,
        reason: &'static str,
    },

    /// The function did not change sign on the bracket.
    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// An iterative procedure stopped without meeting its tolerance.
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("invalid sweep specification: {0}")]
    InvalidSweep(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for ModelError {
    fn from(e: std::io::Error) -> Self {
        ModelError::Io(e.to_string())
    }
}

impl From<csv::Error> for ModelError {
    fn from(e: csv::Error) -> Self {
        ModelError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for ModelError {
    fn from(e: serde_json::Error) -> Self {
        ModelError::Io(e.to_string())
    }
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;
