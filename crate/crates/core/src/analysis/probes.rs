use memchr::memmem;
use serde::{Deserialize, Serialize};

use super::FactorClasses;
use crate::words::{FactorOracle, Letter, Morphism, Word, WordSource};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum PeriodicityVerdict {
    /// The word is `u v^ω` with `|u| = preperiod`, `|v| = period`, both minimal.
    Periodic {
        preperiod: u64,
        period: u64,
    },
    /// `P(n) > n` for every `n` up to the horizon.
    NotPeriodicUpTo {
        horizon: usize,
    },
    Undecided {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum UniformRecurrenceVerdict {
    UniformlyRecurrent {
        reason: String,
    },
    /// `witness^power` is a factor.
    NotUniformlyRecurrent {
        witness: Word,
        power: usize,
    },
    Undecided {
        reason: String,
    },
}

const MIN_PROBE_BUFFER: u64 = 1 << 16;
const MAX_CERTIFY_LEN: usize = 1 << 22;

/// Minimal `(preperiod, period)` of `pre · per^ω`.
pub fn minimal_period_pair(pre: &[Letter], per: &[Letter]) -> (usize, usize) {
    assert!(!per.is_empty(), "period must be nonempty");
    let p = (1..=per.len())
        .find(|&d| per.len().is_multiple_of(d) && per.chunks(d).all(|c| c == &per[..d]))
        .unwrap_or(per.len());
    let mut cycle: Vec<Letter> = per[..p].to_vec();
    let mut q = pre.len();
    while q > 0 && pre[q - 1] == cycle[p - 1] {
        cycle.rotate_right(1);
        q -= 1;
    }
    (q, p)
}

fn undecided(reason: impl Into<String>) -> PeriodicityVerdict {
    PeriodicityVerdict::Undecided { reason: reason.into() }
}

/// Tests `P(n) ≤ n` for every `n` up to `horizon` on the buffer, then extracts
/// and certifies a period when the threshold is met.
pub fn periodicity_probe(oracle: &mut FactorOracle, horizon: usize) -> PeriodicityVerdict {
    let cap = oracle.config().buffer_cap as u64;
    let pc = oracle.prefix_certificate(horizon).ok().flatten().unwrap_or(0);
    let t = MIN_PROBE_BUFFER.max(pc).max(4 * horizon as u64 + 4).min(cap) as usize;
    if let Err(e) = oracle.ensure_prefix(t) {
        return undecided(e.to_string());
    }
    let mut classes = FactorClasses::new(&oracle.buffer()[..t]);
    let mut threshold = None;
    while classes.len() < horizon && classes.advance() {
        if classes.count() <= classes.len() {
            threshold = Some(classes.len());
            break;
        }
    }
    if threshold.is_none() {
        if classes.len() < horizon {
            return undecided("buffer shorter than the horizon");
        }
        return PeriodicityVerdict::NotPeriodicUpTo { horizon };
    }
    match oracle.source().clone() {
        WordSource::EventuallyPeriodic { preperiod, period, .. } => {
            let (q, p) = minimal_period_pair(&preperiod, &period);
            PeriodicityVerdict::Periodic { preperiod: q as u64, period: p as u64 }
        }
        WordSource::PurelyMorphic { morphism, .. } => certify_morphic(oracle, &morphism, None, t, horizon),
        WordSource::Morphic { morphism, coding, .. } => certify_morphic(oracle, &morphism, Some(&coding), t, horizon),
        WordSource::SturmianCF { .. } => undecided("low complexity observed on a Sturmian buffer"),
    }
}

fn certify_morphic(
    oracle: &mut FactorOracle,
    phi: &Morphism,
    coding: Option<&Morphism>,
    t: usize,
    horizon: usize,
) -> PeriodicityVerdict {
    let raw = match oracle.underlying_prefix(t) {
        Ok(Some(raw)) => raw,
        Ok(None) => return undecided("no underlying fixed point"),
        Err(e) => return undecided(e.to_string()),
    };
    for p in 1..=horizon.min(t / 4) {
        let q = (0..t - p).rev().find(|&i| raw[i] != raw[i + p]).map_or(0, |i| i + 1);
        if t - q < t / 2 {
            continue;
        }
        let (u, v) = (&raw[..q], &raw[q..q + p]);
        if !is_fixed(phi, u, v) {
            continue;
        }
        let (cu, cv) = match coding {
            Some(c) => match (c.apply(u), c.apply(v)) {
                (Ok(cu), Ok(cv)) => (cu, cv),
                _ => continue,
            },
            None => (u.to_vec(), v.to_vec()),
        };
        let (q, p) = minimal_period_pair(&cu, &cv);
        return PeriodicityVerdict::Periodic { preperiod: q as u64, period: p as u64 };
    }
    undecided("no candidate period is invariant under the morphism")
}

/// Whether `φ(u v^ω) = u v^ω`.
fn is_fixed(phi: &Morphism, u: &[Letter], v: &[Letter]) -> bool {
    let (Ok(fu), Ok(fv)) = (phi.apply(u), phi.apply(v)) else { return false };
    if fv.is_empty() {
        return false;
    }
    let lcm = v.len() / gcd(v.len(), fv.len()) * fv.len();
    let n = u.len().max(fu.len()) + lcm;
    if n > MAX_CERTIFY_LEN {
        return false;
    }
    let at = |pre: &[Letter], per: &[Letter], i: usize| {
        if i < pre.len() {
            pre[i]
        } else {
            per[(i - pre.len()) % per.len()]
        }
    };
    (0..n).all(|i| at(u, v, i) == at(&fu, &fv, i))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Primitivity proves uniform recurrence; a factor `wⁿ` with `|w| ≤ max_len`
/// in the buffer witnesses its failure; anything else is undecided.
pub fn uniform_recurrence_probe(oracle: &mut FactorOracle, power: usize, max_len: usize) -> UniformRecurrenceVerdict {
    let WordSource::PurelyMorphic { morphism, .. } = oracle.source() else {
        return UniformRecurrenceVerdict::Undecided { reason: "source is not purely morphic".into() };
    };
    let prim = morphism.is_primitive();
    if prim.primitive {
        return UniformRecurrenceVerdict::UniformlyRecurrent {
            reason: format!("primitive morphism, matrix power {} is positive", prim.witness.unwrap_or(0)),
        };
    }
    let t = (MIN_PROBE_BUFFER as usize).min(oracle.config().buffer_cap);
    if let Err(e) = oracle.ensure_prefix(t) {
        return UniformRecurrenceVerdict::Undecided { reason: e.to_string() };
    }
    let buf = &oracle.buffer()[..t];
    for len in 1..=max_len {
        let mut candidates: Vec<&[Letter]> = buf.windows(len).collect();
        candidates.sort_unstable();
        candidates.dedup();
        for w in candidates {
            let pw = w.repeat(power);
            if memmem::find(buf, &pw).is_some() {
                return UniformRecurrenceVerdict::NotUniformlyRecurrent { witness: w.to_vec(), power };
            }
        }
    }
    UniformRecurrenceVerdict::Undecided { reason: format!("no power {power} of a word of length ≤ {max_len} found") }
}
