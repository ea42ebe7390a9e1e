use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] io::Error),

    #[error("{kind} at row {row}: {detail}")]
    Parse {
        row: usize,
        kind: &'static str,
        detail: String,
    },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid class pair: {0}")]
    InvalidPair(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("noise-zone energy is zero")]
    ZeroNoiseEnergy,

    #[error("no discriminative energy")]
    NoDiscriminativeEnergy,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for failures of the numerical routines rather than of the input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Numeric(_) | Error::ZeroNoiseEnergy | Error::NoDiscriminativeEnergy
        )
    }
}
