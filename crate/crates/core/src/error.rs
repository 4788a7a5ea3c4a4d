use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("resolution mismatch: {0} vs {1}")]
    ResolutionMismatch(f64, f64),

    #[error("non-finite coordinate in point")]
    NonFinite,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {0} is not on the unit sphere")]
    NotOnSphere(usize),

    #[error("string parameters must be strictly increasing (index {0})")]
    NonMonotoneParams(usize),

    #[error("worldsheet does not cover its carrier")]
    Uncovered,

    #[error("family members have mixed kinds ({0} and {1})")]
    MixedKinds(&'static str, &'static str),

    #[error("unknown descriptor `{0}`")]
    UnknownDescriptor(String),

    #[error("corner_level requires a tiling attached to the pipeline")]
    MissingTiling,

    #[error("point lies outside the tiling")]
    OutsideTiling,

    #[error("ring torus requires c > r (c = {c}, r = {r})")]
    NotRingTorus { c: f64, r: f64 },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
