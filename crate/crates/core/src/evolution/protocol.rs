use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scheme::{build_scheme_from_rauzy, find_clean_order, Scheme};
use crate::words::FactorOracle;

use super::evolve::evolve_keyed;
use super::light::{evolution_method, LightScheme};

/// One step of the protocol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProtocolEntry {
    pub light_scheme: LightScheme,
    pub support_edge: u32,
    /// `(e, f)` pairs, in the numbering of this entry, whose path `e·v·f` is not admissible.
    pub rejected_pairs: Vec<(u32, u32)>,
}

/// Size statistics of the scheme at one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepStats {
    pub scale: u64,
    pub vertices: usize,
    pub edges: usize,
    pub max_word: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodDetection {
    pub preperiod: usize,
    pub period: usize,
    /// Full periods observed after the preperiod.
    pub repetitions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Protocol {
    pub k: Option<usize>,
    pub entries: Vec<ProtocolEntry>,
    pub stats: Vec<StepStats>,
    /// The scheme before each step, then the final one.
    pub schemes: Vec<Scheme>,
    /// Why the run stopped early, if it did.
    pub error: Option<Error>,
}

/// Length of the shortest support edge word.
pub fn scale(s: &Scheme) -> Result<u64> {
    s.support_edges().iter().map(|&n| s.e(n).word.len).min().ok_or(Error::NoSupportEdge)
}

pub fn step_stats(s: &Scheme) -> Result<StepStats> {
    Ok(StepStats {
        scale: scale(s)?,
        vertices: s.vertex_count(),
        edges: s.edge_count(),
        max_word: s.edges().iter().map(|e| e.word.len).max().unwrap_or(0),
    })
}

/// Builds the scheme at the first clean order `≥ k0` and evolves it `steps` times.
///
/// Failures after construction end the run early with the entries so far.
pub fn run_protocol(oracle: &mut FactorOracle, k0: usize, steps: usize) -> Protocol {
    let mut p = Protocol { k: None, entries: Vec::new(), stats: Vec::new(), schemes: Vec::new(), error: None };
    let start = find_clean_order(oracle, k0).and_then(|k| build_scheme_from_rauzy(oracle, k).map(|s| (k, s)));
    let mut s = match start {
        Ok((k, s)) => {
            p.k = Some(k);
            s
        }
        Err(e) => {
            p.error = Some(e);
            return p;
        }
    };
    for _ in 0..steps {
        match step(&s, oracle) {
            Ok((entry, stats, next)) => {
                p.entries.push(entry);
                p.stats.push(stats);
                p.schemes.push(std::mem::replace(&mut s, next));
            }
            Err(e) => {
                p.error = Some(e);
                break;
            }
        }
    }
    p.schemes.push(s);
    p
}

fn step(s: &Scheme, oracle: &mut FactorOracle) -> Result<(ProtocolEntry, StepStats, Scheme)> {
    let light = LightScheme::of(s);
    let (v, renumbering) = evolution_method(&light)?;
    let stats = step_stats(s)?;
    let ev = evolve_keyed(s, v, oracle)?;
    debug_assert_eq!(renumbering.apply(&ev.keys), (1..=ev.keys.len() as u32).collect::<Vec<_>>());
    let entry = ProtocolEntry { light_scheme: light, support_edge: v, rejected_pairs: ev.rejected };
    Ok((entry, stats, ev.scheme))
}

/// Smallest period `p`, then smallest preperiod `q`, with `entries[i] == entries[i + p]`
/// for every `i ≥ q` and at least `min_repetitions · p` entries from `q` on.
pub fn detect_period<T: PartialEq>(entries: &[T], min_repetitions: usize) -> Option<PeriodDetection> {
    let t = entries.len();
    let r = min_repetitions.max(1);
    if t < 3 {
        return None;
    }
    for p in 1..=t / r {
        let q = (0..t - p).rev().find(|&i| entries[i] != entries[i + p]).map_or(0, |i| i + 1);
        if t - q >= r * p {
            return Some(PeriodDetection { preperiod: q, period: p, repetitions: (t - q) / p });
        }
    }
    None
}

/// Serialized form of a protocol step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolStep {
    pub step: usize,
    pub light_scheme: LightScheme,
    pub support_edge: u32,
    pub rejected_pairs: Vec<(u32, u32)>,
    pub scale: u64,
}

impl Protocol {
    pub fn steps(&self) -> Vec<ProtocolStep> {
        self.entries
            .iter()
            .zip(&self.stats)
            .enumerate()
            .map(|(i, (e, st))| ProtocolStep {
                step: i,
                light_scheme: e.light_scheme.clone(),
                support_edge: e.support_edge,
                rejected_pairs: e.rejected_pairs.clone(),
                scale: st.scale,
            })
            .collect()
    }

    /// Number of distinct entries among the first `n`.
    pub fn distinct_entries(&self, n: usize) -> usize {
        let set: std::collections::HashSet<&ProtocolEntry> = self.entries.iter().take(n).collect();
        set.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sequence() {
        assert_eq!(detect_period(&[7, 7, 7, 7], 3), Some(PeriodDetection { preperiod: 0, period: 1, repetitions: 4 }));
    }

    #[test]
    fn preperiod_then_cycle() {
        let seq = [9, 8, 1, 2, 1, 2, 1, 2, 1, 2];
        assert_eq!(detect_period(&seq, 3), Some(PeriodDetection { preperiod: 2, period: 2, repetitions: 4 }));
        assert_eq!(detect_period(&[1, 2, 3, 4, 5, 6], 3), None);
        assert_eq!(detect_period(&[1, 1], 3), None);
    }
}
