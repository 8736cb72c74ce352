use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable mismatch: {left} vs {right} variables")]
    VariableMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator order {order} exceeds the cap of {cap}")]
    OrderCap { order: u32, cap: u32 },

    #[error("unknown frame `{0}`")]
    UnknownFrame(String),

    #[error("unknown complex `{0}`")]
    UnknownComplex(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("frame `{0}` has no coframe")]
    MissingCoframe(String),

    #[error("operator matrix is not unipotent-invertible: {0}")]
    NotInvertible(String),

    #[error("differentials {index} and {next} do not compose to zero")]
    CompositionFailure { index: usize, next: usize },

    #[error("inhomogeneous complex: {0}")]
    Inhomogeneous(String),

    #[error("reduction precondition failed: {0}")]
    Reduction(String),

    #[error("input is not a cocycle at level {level}")]
    NotACocycle {
        level: usize,
        residuals: Vec<String>,
    },

    #[error("integrability conditions fail: {}", failed.join("; "))]
    Integrability { failed: Vec<String> },

    #[error("parse error: {0}")]
    Parse(String),
}
