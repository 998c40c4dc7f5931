use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("non-finite input value at index {index}")]
    NonFiniteInput { index: usize },

    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),

    #[error("column {0} has an empty name")]
    EmptyColumnName(usize),

    #[error("dataset must have at least one column")]
    NoColumns,

    #[error("row {row} has {found} values, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("{found} labels supplied for {expected} rows")]
    LabelCount { expected: usize, found: usize },

    #[error("invalid label `{value}` at row {row}")]
    InvalidLabel { row: usize, value: String },

    #[error("oracle limit exceeded: {n} points, limit is {limit}")]
    OracleLimit { n: usize, limit: usize },

    #[error("alpha must be a finite positive number, got {0}")]
    InvalidAlpha(f64),

    #[error("relevance did not occur; there are no interstices to extract")]
    NotOccurred,

    #[error("row {0} of the report is not part of the slice")]
    UnknownRow(usize),

    #[error("column `{0}` is constant and cannot be standardized")]
    ConstantColumn(String),

    #[error("need at least {needed} rows, got {found}")]
    TooFewRows { needed: usize, found: usize },

    #[error("need at least {needed} features, got {found}")]
    TooFewFeatures { needed: usize, found: usize },

    #[error("free index {index} out of range for {dims} features")]
    FreeIndexOutOfRange { index: usize, dims: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid merge tree: {0}")]
    InvalidTree(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}
