use thiserror::Error;

/// Errors produced by the wave constructions and the solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid thermodynamic state: {0}")]
    Domain(String),
    #[error("medium-state solve did not converge: {0}")]
    NoSolution(String),
    #[error("recovered sonic state is not in the transonic inflow region: {0}")]
    InvalidRegion(String),
    #[error("wave strengths leave the admissible region: {0}")]
    InvalidStrengths(String),
    #[error("boundary-layer launch failed: {0}")]
    LaunchFailure(String),
    #[error("nonlinear solve failed to converge: {0}")]
    ConvergenceFailure(String),
    #[error("positivity violation: {0}")]
    PositivityViolation(String),
    #[error("time step collapsed below the representable range")]
    CflCollapse,
    #[error("not enough samples in the fit window: {0}")]
    InsufficientData(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
