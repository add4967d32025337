//! Support edges, elementary evolution, the evolution method, protocols and riggings.

pub mod evolve;
pub mod light;
pub mod protocol;
pub mod rigging;

pub use evolve::{evolve, evolve_keyed, EdgeKey, Evolution};
pub use light::{evolution_method, LightScheme, Renumbering};
pub use protocol::{
    detect_period, run_protocol, scale, step_stats, PeriodDetection, Protocol, ProtocolEntry, ProtocolStep, StepStats,
};
pub use rigging::{adaptive_rigging, rigging, source_test_words, test_words, RiggedPath, Rigging, RiggingBounds};

use crate::error::Result;
use crate::scheme::Scheme;

/// Support edges in ascending order, failing when there are none.
pub fn support_edges(s: &Scheme) -> Result<Vec<u32>> {
    let v = s.support_edges();
    if v.is_empty() {
        Err(crate::error::Error::NoSupportEdge)
    } else {
        Ok(v)
    }
}

#[cfg(test)]
mod tests;
