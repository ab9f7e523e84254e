use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the recognition pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty image")]
    EmptyImage,

    #[error("blank image")]
    BlankImage,

    #[error("index out of bounds: ({row}, {col}) in {width}x{height} raster")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        width: usize,
        height: usize,
    },

    #[error("unsupported grid: n = {0} (expected 2, 3, 4 or 5)")]
    UnsupportedGrid(usize),

    #[error("not a stroke pixel")]
    NotStrokePixel,

    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("zero dimension: {0}")]
    ZeroDimension(&'static str),

    #[error("empty batch")]
    EmptyBatch,

    #[error("empty set")]
    EmptySet,

    #[error("divergent objective")]
    DivergentObjective,

    #[error("training diverged")]
    TrainingDiverged,

    #[error("no classes found in {0}")]
    NoClassesFound(PathBuf),

    #[error("class {class} has no samples")]
    EmptyClass { class: String },

    #[error("class {class} has {available} samples, need {needed}")]
    InsufficientSamples {
        class: String,
        available: usize,
        needed: usize,
    },

    #[error("too many classes: {requested} requested, {available} prototypes available")]
    TooManyClasses { requested: usize, available: usize },

    #[error("invalid image file {path}: {reason}")]
    InvalidImageFile { path: PathBuf, reason: String },

    #[error("invalid model file: {0}")]
    InvalidModelFile(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
