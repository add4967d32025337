use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::hash::Hashed;
use crate::words::{Factor, FactorOracle, Letter};

use super::model::Scheme;

/// Upper bound on the number of visits recorded by one trace.
pub const MAX_TRACE_VISITS: usize = 1 << 24;

/// The word of `edge` occurs at `pos` and the parse goes through it there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Visit {
    pub edge: u32,
    pub pos: u64,
}

/// The unique reading of a stretch of the infinite word through a scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub visits: Vec<Visit>,
    pub start: u64,
    pub span: u64,
}

/// Reads the word through the scheme from the earliest stored label
/// occurrence until at least `span` letters are covered.
///
/// Collecting vertices continue along their single out-edge; distributing
/// vertices pick the out-edge whose word continues with the next letter.
/// Every step is checked against the word by hash.
pub fn trace(s: &Scheme, oracle: &FactorOracle, span: u64) -> Result<Trace> {
    let (mut x, start) = s
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v.label.pos))
        .min_by_key(|&(i, p)| (p, i))
        .ok_or_else(|| Error::TraceMismatch("scheme has no vertices".into()))?;
    let mut edge_hash = Vec::with_capacity(s.edge_count());
    let mut branch: Vec<Option<Letter>> = Vec::with_capacity(s.edge_count());
    for e in s.edges() {
        edge_hash.push(oracle.hash(e.word)?);
        let lt = s.label(e.tail).len;
        branch.push(if e.word.len > lt { Some(oracle.letter_at(e.word.pos + lt)?) } else { None });
    }
    let end = start.saturating_add(span);
    let mut p = start;
    let mut visits = Vec::new();
    let mut stalled = 0usize;
    while p <= end {
        if visits.len() >= MAX_TRACE_VISITS {
            return Err(Error::HorizonExceeded { needed: span, cap: p - start });
        }
        let out = s.out_edges(x);
        let n = if let [only] = out {
            *only
        } else {
            let letter = oracle.letter_at(p + s.label(x).len)?;
            *out.iter()
                .find(|&&n| branch[n as usize - 1] == Some(letter))
                .ok_or_else(|| Error::TraceMismatch(format!("no edge out of vertex {x} continues at {p}")))?
        };
        let e = s.e(n);
        let h: Hashed = oracle.hash(Factor::new(p, e.word.len))?;
        if h != edge_hash[n as usize - 1] {
            return Err(Error::TraceMismatch(format!("word of edge {n} does not occur at {p}")));
        }
        visits.push(Visit { edge: n, pos: p });
        let step = e.word.len - s.label(e.head).len;
        if step == 0 {
            stalled += 1;
            if stalled > s.edge_count() {
                return Err(Error::TraceMismatch("trace makes no progress".into()));
            }
        } else {
            stalled = 0;
        }
        p += step;
        x = e.head;
    }
    Ok(Trace { visits, start, span })
}

impl Trace {
    pub fn edges(&self) -> Vec<u32> {
        self.visits.iter().map(|v| v.edge).collect()
    }

    /// Every run of at most `max_len` consecutive edges.
    pub fn observed_paths(&self, max_len: usize) -> HashSet<Vec<u32>> {
        let edges = self.edges();
        let mut out = HashSet::new();
        for i in 0..edges.len() {
            for l in 1..=max_len.min(edges.len() - i) {
                out.insert(edges[i..i + l].to_vec());
            }
        }
        out
    }

    /// Index of the first visit at which `path` is read, if any.
    pub fn find_path(&self, path: &[u32]) -> Option<usize> {
        if path.is_empty() || path.len() > self.visits.len() {
            return None;
        }
        (0..=self.visits.len() - path.len())
            .find(|&i| self.visits[i..i + path.len()].iter().zip(path).all(|(v, &n)| v.edge == n))
    }
}
