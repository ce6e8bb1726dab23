use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Young function: {0}")]
    InvalidYoung(String),
    #[error("not convex: {0}")]
    NotConvex(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("axis mismatch: {0}")]
    AxisMismatch(String),
    #[error("window has zero L2 norm")]
    ZeroWindow,
    #[error("no finite value: {0}")]
    NonFinite(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("resolution guard: {0}")]
    ResolutionGuard(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
