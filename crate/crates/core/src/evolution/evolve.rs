use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scheme::admissible::EXPLICIT_LIMIT;
use crate::scheme::paths::glue;
use crate::scheme::{trace, Role, Scheme, SchemeEdge, SchemeVertex};
use crate::words::{Factor, FactorOracle, Rope};

/// Provenance of an edge after an evolution step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKey {
    /// Descends from the old edge with this number.
    Surviving(u32),
    /// The new edge through the support edge between in-edge `e` and out-edge `f`.
    New(u32, u32),
}

/// Result of one elementary evolution, before renumbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evolution {
    /// New scheme, edges numbered by ascending key.
    pub scheme: Scheme,
    /// `keys[i]` is the key of edge `i + 1`.
    pub keys: Vec<EdgeKey>,
    pub admissible: Vec<(u32, u32)>,
    pub rejected: Vec<(u32, u32)>,
}

#[derive(Debug, Clone)]
struct Draft {
    tail: usize,
    head: usize,
    word: Factor,
    key: EdgeKey,
}

/// Replaces the support edge `v` by the admissible composites `e·v·f` and
/// smooths vertices left with one in-edge and one out-edge.
pub fn evolve(s: &Scheme, v: u32, oracle: &mut FactorOracle) -> Result<Scheme> {
    evolve_keyed(s, v, oracle).map(|e| e.scheme)
}

pub fn evolve_keyed(s: &Scheme, v: u32, oracle: &mut FactorOracle) -> Result<Evolution> {
    if !s.support_edges().contains(&v) {
        return Err(Error::NotSupportEdge(v));
    }
    let ve = *s.edge(v)?;
    let (l, r) = (ve.tail, ve.head);
    let b = ve.word;
    let ins: Vec<u32> = s.in_edges(l).to_vec();
    let outs: Vec<u32> = s.out_edges(r).to_vec();

    let composite = |e: u32, f: u32| -> Rope {
        let mut w = Rope::from_factor(s.e(e).word);
        w = glue(w, b, s.label(l).len);
        glue(w, s.e(f).word, s.label(r).len)
    };
    let mut longest = 0u64;
    for &e in &ins {
        for &f in &outs {
            longest = longest.max(composite(e, f).len());
        }
    }
    let wc = oracle
        .window_certificate(longest as usize)?
        .ok_or(Error::HorizonExceeded { needed: u64::MAX, cap: oracle.config().position_cap })?;
    let t = trace(s, oracle, wc)?;

    // first observed occurrence of each composite: (position of e, position of v)
    let mut seen: BTreeMap<(u32, u32), (u64, u64)> = BTreeMap::new();
    for w in t.visits.windows(3) {
        if w[1].edge == v {
            seen.entry((w[0].edge, w[2].edge)).or_insert((w[0].pos, w[1].pos));
        }
    }
    let admissible: Vec<(u32, u32)> = seen.keys().copied().collect();
    let mut rejected = Vec::new();
    for &e in &ins {
        for &f in &outs {
            let observed = seen.contains_key(&(e, f));
            let c = composite(e, f);
            if c.len() <= EXPLICIT_LIMIT && oracle.searchable(c.len() as usize)? {
                let word = oracle.materialize_rope(&c, EXPLICIT_LIMIT)?;
                if oracle.contains(&word)? != observed {
                    return Err(Error::OracleDisagreement(format!(
                        "composite {e}-{v}-{f}: direct search and trace disagree"
                    )));
                }
            }
            if !observed {
                rejected.push((e, f));
            }
        }
    }
    for &e in &ins {
        if !admissible.iter().any(|p| p.0 == e) {
            return Err(Error::DegenerateResult(format!("in-edge {e} has no admissible continuation")));
        }
    }
    for &f in &outs {
        if !admissible.iter().any(|p| p.1 == f) {
            return Err(Error::DegenerateResult(format!("out-edge {f} has no admissible predecessor")));
        }
    }

    // surviving vertices keep their order, then x_e for each in-edge, then y_f for each out-edge
    let mut index = vec![usize::MAX; s.vertex_count()];
    let mut vertices: Vec<SchemeVertex> = Vec::new();
    for (i, x) in s.vertices().iter().enumerate() {
        if i != l && i != r {
            index[i] = vertices.len();
            vertices.push(*x);
        }
    }
    let blen = b.len;
    let mut x_of = BTreeMap::new();
    let mut c_seen = BTreeMap::new();
    for &e in &ins {
        let (_, pv) = seen.iter().find(|(p, _)| p.0 == e).map(|(_, &q)| q).unwrap();
        let c = oracle.letter_at(pv - 1)?;
        if let Some(prev) = c_seen.insert(c, e) {
            return Err(Error::DegenerateResult(format!("in-edges {prev} and {e} share their last letter")));
        }
        x_of.insert(e, vertices.len());
        vertices.push(SchemeVertex { role: Role::Distributing, label: Factor::new(pv - 1, blen + 1) });
    }
    let mut y_of = BTreeMap::new();
    let mut d_seen = BTreeMap::new();
    for &f in &outs {
        let (_, pv) = seen.iter().find(|(p, _)| p.1 == f).map(|(_, &q)| q).unwrap();
        let d = oracle.letter_at(pv + blen)?;
        if let Some(prev) = d_seen.insert(d, f) {
            return Err(Error::DegenerateResult(format!("out-edges {prev} and {f} share their first letter")));
        }
        y_of.insert(f, vertices.len());
        vertices.push(SchemeVertex { role: Role::Collecting, label: Factor::new(pv, blen + 1) });
    }

    let mut drafts: Vec<Draft> = Vec::new();
    for e in s.edges() {
        let n = e.number;
        if n == v {
            continue;
        }
        let (is_in, is_out) = (ins.contains(&n), outs.contains(&n));
        let draft = match (is_in, is_out) {
            (false, false) => {
                Draft { tail: index[e.tail], head: index[e.head], word: e.word, key: EdgeKey::Surviving(n) }
            }
            (true, false) => {
                let (pe, _) = seen.iter().find(|(p, _)| p.0 == n).map(|(_, &q)| q).unwrap();
                let len = e.word.len + blen - s.label(l).len;
                Draft { tail: index[e.tail], head: x_of[&n], word: Factor::new(pe, len), key: EdgeKey::Surviving(n) }
            }
            (false, true) => {
                let (_, pv) = seen.iter().find(|(p, _)| p.1 == n).map(|(_, &q)| q).unwrap();
                let len = blen + e.word.len - s.label(r).len;
                Draft { tail: y_of[&n], head: index[e.head], word: Factor::new(pv, len), key: EdgeKey::Surviving(n) }
            }
            (true, true) => {
                let pv = t
                    .visits
                    .windows(3)
                    .find(|w| w[0].edge == v && w[1].edge == n && w[2].edge == v)
                    .map(|w| w[0].pos)
                    .ok_or_else(|| Error::TraceMismatch(format!("loop edge {n} never read between support edges")))?;
                let len = blen + e.word.len - s.label(r).len + blen - s.label(l).len;
                Draft { tail: y_of[&n], head: x_of[&n], word: Factor::new(pv, len), key: EdgeKey::Surviving(n) }
            }
        };
        drafts.push(draft);
    }
    for (&(e, f), &(_, pv)) in &seen {
        drafts.push(Draft {
            tail: x_of[&e],
            head: y_of[&f],
            word: Factor::new(pv - 1, blen + 2),
            key: EdgeKey::New(e, f),
        });
    }
    for d in &drafts {
        let expected = match d.key {
            EdgeKey::Surviving(n) if n != v && (ins.contains(&n) || outs.contains(&n)) => {
                let e = s.e(n);
                let mut w = Rope::new();
                if outs.contains(&n) {
                    w.push(b);
                    w = glue(w, e.word, s.label(r).len);
                } else {
                    w.push(e.word);
                }
                if ins.contains(&n) {
                    w = glue(w, b, s.label(l).len);
                }
                Some(w)
            }
            _ => None,
        };
        if let Some(w) = expected {
            if oracle.hash_rope(&w)? != oracle.hash(d.word)? {
                return Err(Error::TraceMismatch("rebuilt edge word does not occur where it was read".into()));
            }
        }
    }

    let (vertices, drafts) = smooth(vertices, drafts, oracle)?;
    if drafts.len() < 2 {
        return Err(Error::DegenerateResult(format!("{} edge(s) remain", drafts.len())));
    }
    let mut order: Vec<usize> = (0..drafts.len()).collect();
    order.sort_by_key(|&i| drafts[i].key);
    let edges: Vec<SchemeEdge> = order
        .iter()
        .enumerate()
        .map(|(i, &d)| SchemeEdge {
            number: i as u32 + 1,
            tail: drafts[d].tail,
            head: drafts[d].head,
            word: drafts[d].word,
        })
        .collect();
    let keys = order.iter().map(|&d| drafts[d].key).collect();
    let scheme = Scheme::from_parts(s.k(), vertices, edges)?;
    scheme.check_degrees().map_err(|e| Error::DegenerateResult(e.to_string()))?;
    Ok(Evolution { scheme, keys, admissible, rejected })
}

/// Merges the two edges at every vertex of in- and out-degree one.
fn smooth(
    mut vertices: Vec<SchemeVertex>,
    mut drafts: Vec<Draft>,
    oracle: &FactorOracle,
) -> Result<(Vec<SchemeVertex>, Vec<Draft>)> {
    loop {
        let mut indeg = vec![0usize; vertices.len()];
        let mut outdeg = vec![0usize; vertices.len()];
        for d in &drafts {
            outdeg[d.tail] += 1;
            indeg[d.head] += 1;
        }
        let Some(x) = (0..vertices.len()).find(|&x| indeg[x] == 1 && outdeg[x] == 1) else { break };
        let a = drafts.iter().position(|d| d.head == x).unwrap();
        let b = drafts.iter().position(|d| d.tail == x).unwrap();
        if a == b {
            return Err(Error::DegenerateResult("smoothing leaves a single loop".into()));
        }
        let overlap = vertices[x].label.len;
        let merged = glue(Rope::from_factor(drafts[a].word), drafts[b].word, overlap);
        let word = Factor::new(drafts[a].word.pos, merged.len());
        if oracle.hash(word)? != oracle.hash_rope(&merged)? {
            return Err(Error::TraceMismatch(format!("merged word at vertex {x} does not occur")));
        }
        let new = Draft { tail: drafts[a].tail, head: drafts[b].head, word, key: drafts[a].key.min(drafts[b].key) };
        let (hi, lo) = (a.max(b), a.min(b));
        drafts.remove(hi);
        drafts.remove(lo);
        drafts.push(new);
        vertices.remove(x);
        for d in &mut drafts {
            if d.tail > x {
                d.tail -= 1;
            }
            if d.head > x {
                d.head -= 1;
            }
        }
    }
    Ok((vertices, drafts))
}
