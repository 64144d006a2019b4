use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("moment order {0} is not supported (need 3 ≤ M ≤ {max})", max = crate::basis::MAX_ORDER)]
    UnsupportedOrder(usize),
    #[error("non-positive temperature {0}")]
    NonPositiveTemperature(f64),
    #[error("non-positive density {0}")]
    NonPositiveDensity(f64),
    #[error("coefficients are not compliant with their anchor")]
    NotCompliant,
    #[error("multi-index of degree {degree} exceeds moment order {order}")]
    DegreeTooHigh { degree: usize, order: usize },
    #[error("moment orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid wall: {0}")]
    InvalidWall(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("iterate is infeasible: {0}")]
    Infeasible(String),
    #[error("regularized Jacobian is singular")]
    SingularJacobian,
    #[error("non-finite residual in cell {cell}")]
    NonFinite { cell: usize },
    #[error("solver diverged: residual {residual:e} exceeds {limit:e}")]
    Diverged { residual: f64, limit: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
