use thiserror::Error;

pub type Result<T> = std::result::Result<T, GapError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GapError {
    #[error("input contains no points")]
    EmptyInput,
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is disconnected: no path between {u} and {v}")]
    Disconnected { u: usize, v: usize },
    #[error("not a metric: {0}")]
    NotAMetric(String),
    #[error("sample has {k} sites, at least {min} required")]
    SampleTooSmall { k: usize, min: usize },
    #[error("duplicate sample index {0}")]
    DuplicateIndex(usize),
    #[error("index {index} out of range for {n} sites")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("k = {k} is invalid for {n} sites (need 2 <= k <= n)")]
    InvalidK { k: usize, n: usize },
    #[error("parameter {name} = {value} out of range: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("coreset has {size} representatives but k = {k}; try a smaller epsilon")]
    CoresetTooSmall { size: usize, k: usize },
    #[error("enumeration of {count} subsets exceeds the guard of {guard}")]
    GuardExceeded { count: u128, guard: u128 },
    #[error("fewer than 3 points")]
    TooFewPoints,
    #[error("all points are collinear")]
    Collinear,
    #[error("point {index} lies outside the unit square")]
    OutsideUnitSquare { index: usize },
    #[error("exact arithmetic requested but distances are not half-integers")]
    ExactUnavailable,
    #[error("stream has fewer than {k} distinct points")]
    StreamTooShort { k: usize },
    #[error("{context}:{line}: {message}")]
    Parse {
        context: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Io(String),
}

impl GapError {
    /// Stable kebab-case identifier, printed by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            GapError::EmptyInput => "empty-input",
            GapError::NonFinite { .. } => "non-finite",
            GapError::DimensionMismatch { .. } => "dimension-mismatch",
            GapError::InvalidGraph(_) => "invalid-graph",
            GapError::Disconnected { .. } => "disconnected-graph",
            GapError::NotAMetric(_) => "not-a-metric",
            GapError::SampleTooSmall { .. } => "sample-too-small",
            GapError::DuplicateIndex(_) => "duplicate-index",
            GapError::IndexOutOfRange { .. } => "index-out-of-range",
            GapError::InvalidK { .. } => "invalid-k",
            GapError::InvalidParameter { .. } => "parameter-out-of-range",
            GapError::CoresetTooSmall { .. } => "coreset-too-small",
            GapError::GuardExceeded { .. } => "guard-exceeded",
            GapError::TooFewPoints => "too-few-points",
            GapError::Collinear => "collinear",
            GapError::OutsideUnitSquare { .. } => "outside-unit-square",
            GapError::ExactUnavailable => "exact-unavailable",
            GapError::StreamTooShort { .. } => "stream-too-short",
            GapError::Parse { .. } => "malformed-input",
            GapError::Io(_) => "io",
        }
    }
}
