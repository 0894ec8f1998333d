use thiserror::Error;

/// Errors raised by model construction, assembly and analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular equilibrium system (rank deficiency along {direction})")]
    RankDeficient { direction: String },

    /// Equilibrium deflection too large for the linearization.
    #[error("model invalid: {reason}")]
    ModelInvalid { reason: String, q_f: Vec<f64> },

    #[error("unsupported equilibrium: {0}")]
    UnsupportedEquilibrium(String),

    #[error("topology error: {0}")]
    Topology(String),

    #[error("channel mismatch: {0}")]
    ChannelMismatch(String),

    #[error("algebraic loop is not resolvable (condition number {condition:e})")]
    AlgebraicLoop { condition: f64 },

    #[error("port {0} is already closed")]
    DoubleClosure(String),

    #[error("normalized parameter out of range: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
