use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed grid header: {0}")]
    MalformedHeader(String),

    #[error("grid body holds {found} cells, header declares {expected}")]
    CellCountMismatch { expected: usize, found: usize },

    #[error("non-numeric cell {token:?} at cell index {index}")]
    NonNumericCell { token: String, index: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("point ({x}, {y}) lies outside the grid extent")]
    OutOfExtent { x: f64, y: f64 },

    #[error("latitude {0} is outside the UTM range (|lat| < 84)")]
    LatitudeOutOfRange(f64),

    #[error("invalid UTM zone {0} (expected 1..=60)")]
    InvalidZone(u8),

    #[error("grid is too small: {0}")]
    GridTooSmall(String),

    #[error("band breaks must be non-empty and strictly ascending")]
    UnsortedBreaks,

    #[error("grid holds no valid cells")]
    AllNoData,

    #[error("contour set is empty")]
    EmptyContourSet,

    #[error("no reference point falls on a valid cell")]
    NoUsablePoints,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("cell (row {row}, col {col}) has no downslope neighbour; fill sinks first")]
    NotSinkFilled { row: usize, col: usize },

    #[error("flow directions contain a cycle")]
    CycleDetected,

    #[error("invalid flow direction at cell (row {row}, col {col})")]
    InvalidDirection { row: usize, col: usize },

    #[error("accumulation threshold {threshold} exceeds the maximum accumulation {max}")]
    ThresholdTooHigh { threshold: u64, max: u64 },

    #[error("water mask holds no water cells")]
    NoWaterCells,

    #[error("nothing to render: layer set is empty")]
    EmptyLayerSet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}:{line}: {message}")]
    Input { path: PathBuf, line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::File { path: path.into(), source: Box::new(self) }
    }

    /// True for errors raised when an internal invariant does not hold, as
    /// opposed to bad input.
    pub fn is_internal(&self) -> bool {
        match self {
            Error::CycleDetected | Error::NotSinkFilled { .. } => true,
            Error::File { source, .. } => source.is_internal(),
            _ => false,
        }
    }
}
