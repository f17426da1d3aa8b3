use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not reach tolerance {tol:e} on [{a}, {b}] (best error {best:e})")]
    Quadrature { a: f64, b: f64, tol: f64, best: f64 },

    #[error("root bracketing failed: {0}")]
    Bracket(String),

    #[error("value exceeds representable exponent range: {0}")]
    Overflow(String),

    #[error("grid too small: need at least {need} cells, got {got}")]
    GridTooSmall { need: usize, got: usize },

    #[error("only periodic grids are supported by {0}")]
    NonPeriodic(&'static str),

    #[error("CFL violation: dt = {dt:e} exceeds limit {limit:e}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("solution lost finiteness at t = {t}, node {node} ({context})")]
    Blowup { t: f64, node: usize, context: String },

    #[error("positivity violation at level {level}, node {node}: quadrature under-resolved")]
    Positivity { level: usize, node: usize },

    #[error("need at least {need} snapshots, got {got}")]
    InsufficientSnapshots { need: usize, got: usize },

    #[error("mismatched grids: {0}")]
    MismatchedGrids(String),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
