use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    #[error("Hilbert-space dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("Fock truncation n_max = {n_max} is inadequate: top-level population {top_population:.3e}")]
    TruncationInadequate { n_max: usize, top_population: f64 },

    #[error("kappa = 0 has no unique steady state; use time evolution instead")]
    ZeroCavityLoss,

    #[error("steady-state system is singular (residual {residual:.3e}, kernel dimension {kernel_dim:?})")]
    Singular {
        residual: f64,
        kernel_dim: Option<usize>,
    },

    #[error("indeterminate result: {0}")]
    Indeterminate(String),

    #[error("step size underflow at t = {t} (h = {h:.3e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Config {
        line: Option<usize>,
        message: String,
    },

    #[error("invalid value for `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("unknown figure `{0}` (expected one of fig2a, fig2b, fig3a, fig3b, fig4, fig5a, fig5b)")]
    UnknownFigure(String),

    #[error("{what} is empty")]
    Empty { what: &'static str },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParams {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by user input rather than by a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams { .. }
                | Error::Config { .. }
                | Error::Validation { .. }
                | Error::UnknownFigure(_)
                | Error::DimensionCap { .. }
        )
    }
}
