use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid fuzzy number at index {index}: {reason}")]
    InvalidFuzzyNumber { index: usize, reason: String },

    #[error("component {component}: {source}")]
    Component {
        component: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("unsupported dimension {n}: vertex enumeration is limited to n <= {max}")]
    UnsupportedDimension { n: usize, max: usize },

    #[error("singular matrix: pivot {pivot:e} in column {column}")]
    Singular { column: usize, pivot: f64 },

    #[error("numeric range error: {0}")]
    NumericRange(String),

    #[error("integration diverged at t = {t}")]
    Divergence { t: f64 },

    #[error("failed to parse scenario: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn in_component(self, component: usize) -> Self {
        Error::Component {
            component,
            source: Box::new(self),
        }
    }

    /// True for failures caused by floating-point range problems rather than bad input.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::Singular { .. } | Error::NumericRange(_) | Error::Divergence { .. } => true,
            Error::Component { source, .. } => source.is_numeric(),
            _ => false,
        }
    }
}
