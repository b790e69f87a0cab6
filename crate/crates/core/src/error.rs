use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{quantity} = {value} is outside the domain: {reason}")]
    Domain {
        quantity: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("radial quantum number n = {n} has no closed form (available for n <= 2)")]
    OutOfRange { n: u32 },

    #[error("superpotential has a pole at r = {r} (node of the wavefunction)")]
    Pole { r: f64 },

    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {estimate:e})")]
    QuadratureFailure { subdivisions: usize, estimate: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("no bound state with {n} nodes for l = {l}: {reason}")]
    NoBoundState { n: u32, l: u32, reason: String },

    #[error("radial integration failed: {0}")]
    IntegrationFailure(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
