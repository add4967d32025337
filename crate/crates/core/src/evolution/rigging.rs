use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scheme::{path_word, Scheme, SchemePath};
use crate::words::{letters_and_pairs, FactorOracle, Letter, Morphism, Word, WordSource};

use super::protocol::scale;

/// `ψ(φᵏ(c))` for every letter `c`, then `ψ(φᵏ(cd))` for every 2-factor `cd`
/// of `φ^∞(seed)`, pairs in lexicographic order.
pub fn test_words(phi: &Morphism, coding: Option<&Morphism>, seed: Letter, k: usize) -> Result<Vec<Word>> {
    let (_, pairs, _) = letters_and_pairs(phi, seed).ok_or(Error::HorizonExceeded { needed: u64::MAX, cap: 0 })?;
    let code = |w: Word| -> Result<Word> {
        match coding {
            Some(c) => c.apply(&w),
            None => Ok(w),
        }
    };
    let mut out = Vec::new();
    for c in phi.domain().letters() {
        out.push(code(phi.power(&[c], k)?)?);
    }
    for (c, d) in pairs {
        out.push(code(phi.power(&[c, d], k)?)?);
    }
    Ok(out)
}

/// Test words of the oracle's source, which must be morphic.
pub fn source_test_words(source: &WordSource, k: usize) -> Result<Vec<Word>> {
    let (phi, seed, coding) =
        source.morphic_parts().ok_or_else(|| Error::InvalidArgument("test words need a morphic source".into()))?;
    test_words(phi, coding, seed, k)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RiggedPath {
    pub edges: SchemePath,
    /// Not a proper subpath of another path of the same set.
    pub maximal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rigging {
    pub k: usize,
    /// `sets[i]` lists the symmetric paths whose front words are factors of test word `i`.
    pub sets: Vec<Vec<RiggedPath>>,
    /// Longest path, in edges.
    pub size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiggingBounds {
    /// Most paths kept per test word.
    pub path_cap: usize,
    /// Longest test word materialized.
    pub word_budget: usize,
}

impl Default for RiggingBounds {
    fn default() -> Self {
        RiggingBounds { path_cap: 1 << 14, word_budget: 1 << 22 }
    }
}

/// Start positions of every occurrence, overlapping ones included.
fn occurrences(hay: &[Letter], needle: &[Letter]) -> Vec<usize> {
    let mut out = Vec::new();
    if needle.is_empty() || needle.len() > hay.len() {
        return out;
    }
    let finder = memchr::memmem::Finder::new(needle);
    let mut from = 0;
    while from + needle.len() <= hay.len() {
        match finder.find(&hay[from..]) {
            Some(p) => {
                out.push(from + p);
                from += p + 1;
            }
            None => break,
        }
    }
    out
}

/// Symmetric paths whose front words occur in each test word, with maximal
/// elements marked.
pub fn rigging(s: &Scheme, tests: &[Word], k: usize, oracle: &FactorOracle, bounds: RiggingBounds) -> Result<Rigging> {
    let longest = tests.iter().map(|q| q.len()).max().unwrap_or(0);
    if longest > bounds.word_budget {
        return Err(Error::HorizonExceeded { needed: longest as u64, cap: bounds.word_budget as u64 });
    }
    let mut tails: Vec<Option<Word>> = Vec::with_capacity(s.edge_count());
    let mut words: Vec<Option<Word>> = Vec::with_capacity(s.edge_count());
    for e in s.edges() {
        if e.word.len as usize > longest {
            words.push(None);
            tails.push(None);
            continue;
        }
        let w = oracle.materialize(e.word)?;
        tails.push(Some(w[s.label(e.tail).len as usize..].to_vec()));
        words.push(Some(w));
    }
    let mut sets = Vec::with_capacity(tests.len());
    let mut size = 0;
    for q in tests {
        let mut found: Vec<SchemePath> = Vec::new();
        let mut stack: Vec<(SchemePath, usize, Vec<usize>)> = Vec::new();
        for e in s.edges() {
            if !s.is_collecting(e.tail) {
                continue;
            }
            let Some(w) = &words[e.number as usize - 1] else { continue };
            let occ = occurrences(q, w);
            if !occ.is_empty() {
                stack.push((vec![e.number], w.len(), occ));
            }
        }
        while let Some((path, len, occ)) = stack.pop() {
            let head = s.e(*path.last().unwrap()).head;
            if s.is_distributing(head) {
                found.push(path.clone());
                if found.len() > bounds.path_cap {
                    return Err(Error::PathCapExceeded { cap: bounds.path_cap });
                }
            }
            for &n in s.out_edges(head) {
                let Some(ext) = &tails[n as usize - 1] else { continue };
                let next: Vec<usize> = occ
                    .iter()
                    .copied()
                    .filter(|&p| q.get(p + len..p + len + ext.len()) == Some(ext.as_slice()))
                    .collect();
                if !next.is_empty() {
                    let mut p = path.clone();
                    p.push(n);
                    if ext.is_empty() && p.len() > s.edge_count() * (longest + 1) {
                        return Err(Error::PathCapExceeded { cap: bounds.path_cap });
                    }
                    stack.push((p, len + ext.len(), next));
                }
            }
        }
        found.sort();
        found.dedup();
        let set: Vec<RiggedPath> = found
            .iter()
            .map(|p| RiggedPath {
                edges: p.clone(),
                maximal: !found.iter().any(|o| o.len() > p.len() && o.windows(p.len()).any(|w| w == p.as_slice())),
            })
            .collect();
        size = size.max(found.iter().map(|p| p.len()).max().unwrap_or(0));
        sets.push(set);
    }
    Ok(Rigging { k, sets, size })
}

/// Rigging at the smallest order whose shortest test word is at least twice the scale.
pub fn adaptive_rigging(s: &Scheme, oracle: &FactorOracle, bounds: RiggingBounds) -> Result<(Rigging, Vec<Word>)> {
    let sc = scale(s)? as usize;
    for k in 0..64 {
        let tests = source_test_words(oracle.source(), k)?;
        let shortest = tests.iter().map(|q| q.len()).min().unwrap_or(0);
        if shortest >= 2 * sc {
            let r = rigging(s, &tests, k, oracle, bounds)?;
            return Ok((r, tests));
        }
        if tests.iter().map(|q| q.len()).max().unwrap_or(0) > bounds.word_budget {
            break;
        }
    }
    Err(Error::HorizonExceeded { needed: 2 * sc as u64, cap: bounds.word_budget as u64 })
}

/// Front word of a rigged path, for checks.
pub fn rigged_word(s: &Scheme, oracle: &FactorOracle, p: &RiggedPath) -> Result<Word> {
    oracle.materialize_rope(&path_word(s, &p.edges), u64::MAX)
}
