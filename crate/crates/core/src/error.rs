use thiserror::Error;

/// Errors produced by the segmentation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: String, right: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("type mismatch: {0}")]
    Type(String),

    #[error("position ({row}, {col}) lies outside a {height}x{width} image")]
    Bounds {
        row: i64,
        col: i64,
        height: usize,
        width: usize,
    },

    #[error(
        "point sampling gave up after {draws} draws with {achieved} of {requested} points placed"
    )]
    PointSampling {
        achieved: usize,
        requested: usize,
        draws: u64,
    },

    #[error("only {survivors} candidate points survive erosion, {requested} prototypes requested")]
    TooFewSurvivors { survivors: usize, requested: usize },

    #[error("balanced accuracy undefined: gold has {positives} object and {negatives} background pixels")]
    UndefinedClass { positives: u64, negatives: u64 },

    #[error("cannot decode image: {0}")]
    Decode(String),

    #[error("cannot encode image: {0}")]
    Encode(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dimension(left: impl ToString, right: impl ToString) -> Self {
        Error::Dimension {
            left: left.to_string(),
            right: right.to_string(),
        }
    }

    /// True for failures caused by the filesystem rather than by the content of the inputs.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
