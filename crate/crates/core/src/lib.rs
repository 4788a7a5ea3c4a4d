//! Computational proximity on finite point sets.
//!
//! Descriptive and strong nearness between regions, antipodality
//! predicates, a matching-antipodal search over region families with an
//! exhaustive oracle, ring-torus worldsheets, and an EEG string pipeline.
//! See the `examples/` directory for one runnable program per capability.

pub mod error;
pub mod descriptors;
pub mod geometry;
pub mod proximity;
pub mod worldsheet;
pub mod but;
pub mod eeg;
pub mod cli;

pub use error::{Error, Result};
