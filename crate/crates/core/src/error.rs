use thiserror::Error;

use crate::imgio::PnmError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize, usize),
        found: (usize, usize, usize),
    },

    #[error("at least 2 frames are required, got {0}")]
    TooFewFrames(usize),

    #[error("pixel {index} is negative or non-finite ({value})")]
    NegativePixel { index: usize, value: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("negative input: {0}")]
    NegativeInput(&'static str),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid frame geometry: {0}")]
    BadGeometry(String),

    #[error("image too small for an 11x11 window: {width}x{height}")]
    TooSmall { width: usize, height: usize },

    #[error("pixel value {value} outside [0, 1]")]
    RangeError { value: f64 },

    #[error("{channels}-channel frame cannot be written as {format}")]
    ChannelMismatch {
        channels: usize,
        format: &'static str,
    },

    #[error(transparent)]
    Pnm(#[from] PnmError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
