use thiserror::Error;

/// Errors raised across the operator algebra, geometry and verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("operator is not in the tangential span: {0}")]
    NonTangentialForm(String),

    #[error("second normal derivative of the target required; symbol calculus closes at order one")]
    ClosureExceeded,

    #[error("kernel rule has a pole: {0}")]
    KernelPole(String),

    #[error("pole of a Gamma factor at lambda = {0}")]
    PoleAtLambda(String),

    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("invalid group element: {0}")]
    InvalidGenerator(String),

    #[error("quadrature budget exceeded: {0}")]
    QuadratureBudgetExceeded(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("point outside chart domain: {0}")]
    ChartDomain(String),

    #[error("extension is not homogeneous: {0}")]
    HomogeneityViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
