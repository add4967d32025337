//! Rauzy graphs, Rauzy schemes and deterministic scheme evolution for infinite words.

pub mod analysis;
pub mod error;
pub mod evolution;
pub mod rauzy_graph;
pub mod scheme;
pub mod words;

pub use error::{Error, Result};

/// Scalar used for spectral estimates and ratio statistics.
pub type Real = f64;
