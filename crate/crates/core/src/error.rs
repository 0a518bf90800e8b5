use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported grid: {0}")]
    UnsupportedGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("window error: {0}")]
    Window(String),

    #[error("degenerate reference: the reference field is identically zero")]
    DegenerateReference,

    #[error("field expected real but max|Im|/max|Re| = {ratio:e}")]
    NotReal { ratio: f64 },

    #[error("log-gamma pole at z = {0}")]
    Pole(i64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("contour error: {0}")]
    Contour(String),

    #[error("branch-domain error: {0}")]
    BranchDomain(String),

    #[error("degenerate Meijer-G parameters b{i} and b{j} (separation {separation:e}); use the contour method")]
    DegenerateParameters { i: usize, j: usize, separation: f64 },

    #[error("series out of range: |w| = {0} >= 1")]
    SeriesOutOfRange(f64),

    #[error("overflow while exponentiating log-space value (Re = {0})")]
    Overflow(f64),

    #[error("excluded sample at (x, p) = ({x}, {p}): {reason}")]
    ExcludedSample { x: f64, p: f64, reason: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
