use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("partition {parts:?} does not fit in a {rows}x{cols} box")]
    BoxViolation { parts: Vec<u32>, rows: usize, cols: usize },
    #[error("enumeration of {count} partitions exceeds the cap {cap}")]
    TooLarge { count: u128, cap: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("contour point {0} hits a pole of the symbol")]
    PoleHit(String),
    #[error("contour infeasible: {0}")]
    ContourInfeasible(String),
    #[error("{what} did not converge (last size {size})")]
    NoConvergence { what: String, size: usize },
    #[error("point {0} lies on a singular set of the action")]
    SingularPoint(String),
    #[error("integral diverges: {0}")]
    DivergentIntegral(String),
    #[error("no critical point in the upper half plane for t = {t}")]
    NoRoot { t: f64 },
    #[error("expected two support roots, found {found}")]
    RootCountMismatch { found: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("edge scale is infinite in the critical regime")]
    CriticalRegime,
    #[error("empty input")]
    EmptyInput,
    #[error("density is not critical (residual {residual})")]
    NotCritical { residual: f64 },
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
