use thiserror::Error;

use crate::io::config::ConfigError;
use crate::io::csv::CsvFormatError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid value for `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An evolution circle reaches cells that are not reconstructed. Means the
    /// ghost layer is too thin for the requested time step.
    #[error("circle of radius {radius} around ({x}, {y}) leaves the reconstructed region")]
    OutsideDomain { x: f64, y: f64, radius: f64 },

    #[error("non-finite solution after step {step} (t = {time})")]
    BlowUp { step: usize, time: f64 },

    #[error("CFL bracket [{lo}, {hi}] is invalid: {reason}")]
    Bracket { lo: f64, hi: f64, reason: String },

    #[error("eigenvalue computation failed: {0}")]
    Eigen(String),

    #[error("problem `{0}` has no closed-form solution")]
    NoExactSolution(&'static str),

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    CsvFormat(#[from] CsvFormatError),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
