use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid photon cutoff {0}: need n_max >= 1")]
    InvalidCutoff(usize),

    #[error("layout error: {0}")]
    Layout(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("evolution is not cyclic: lambda * tau = {product} (expected pi)")]
    Cyclicity { product: f64 },

    #[error("integration diverged at t = {time} ns: {reason}")]
    IntegrationDiverged { time: f64, reason: String },

    #[error("restriction error: {0}")]
    Restriction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
