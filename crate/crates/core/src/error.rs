use std::path::PathBuf;

/// Errors raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {left_name} is {left:?} but {right_name} is {right:?}")]
    Shape {
        left_name: &'static str,
        left: (usize, usize),
        right_name: &'static str,
        right: (usize, usize),
    },

    #[error("length mismatch: {what} has {found} entries, expected {expected}")]
    Length {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("frequency {0} kHz is not in the maximum-range table")]
    UnknownFrequency(f64),

    #[error("corrupt data at byte offset {offset}: {reason}")]
    Corrupt { offset: u64, reason: String },

    #[error("truncated stream at byte offset {offset}: needed {needed} more bytes")]
    Truncated { offset: u64, needed: u64 },

    #[error("unexpected datagram type {found:?}, expected {expected:?}")]
    DatagramType { expected: String, found: String },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Stream(#[from] std::io::Error),

    #[error("image encoding failed: {0}")]
    Image(#[from] image::ImageError),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn shape(
        left_name: &'static str,
        left: (usize, usize),
        right_name: &'static str,
        right: (usize, usize),
    ) -> Self {
        Error::Shape {
            left_name,
            left,
            right_name,
            right,
        }
    }

    /// True for errors caused by user input (bad files, bad parameters)
    /// rather than by the environment.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Image(_) | Error::Stream(_))
    }
}
