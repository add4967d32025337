use crate::error::{Error, Result};
use crate::rauzy_graph::{build_rauzy_graph, word_of_path, GraphPath, RauzyGraph};
use crate::words::{Factor, FactorOracle, Word};

use super::model::{Role, Scheme, SchemeEdge, SchemeVertex};

/// Orders scanned past `k_min` before giving up.
pub const CLEAN_ORDER_SCAN: usize = 64;

fn occurrence(oracle: &mut FactorOracle, w: &Word) -> Result<Factor> {
    let pos = oracle.find(w)?.ok_or_else(|| Error::InvalidSource("Rauzy graph word is not a factor".into()))?;
    Ok(Factor::new(pos, w.len() as u64))
}

/// Collapses the non-special vertices of `G_k` into chains between special vertices.
///
/// Edges are numbered by the lexicographic order of their chain words.
pub fn build_scheme_from_rauzy(oracle: &mut FactorOracle, k: usize) -> Result<Scheme> {
    let g = build_rauzy_graph(oracle, k)?;
    scheme_from_graph(oracle, &g)
}

pub(crate) fn scheme_from_graph(oracle: &mut FactorOracle, g: &RauzyGraph) -> Result<Scheme> {
    let report = g.report();
    if report.is_cycle {
        return Err(Error::GraphIsCycle);
    }
    if !report.strongly_connected {
        return Err(Error::NotStronglyConnected);
    }
    if report.collecting.iter().any(|v| report.distributing.contains(v)) {
        return Err(Error::BispecialAtOrder(g.k));
    }
    let special = report.special();
    let mut index = vec![usize::MAX; g.vertices.len()];
    let mut vertices = Vec::with_capacity(special.len());
    for (i, &v) in special.iter().enumerate() {
        index[v] = i;
        let role = if g.is_collecting(v) { Role::Collecting } else { Role::Distributing };
        vertices.push(SchemeVertex { role, label: occurrence(oracle, &g.vertices[v])? });
    }
    let mut chains: Vec<(Word, usize, usize)> = Vec::new();
    for &v in &special {
        for &first in g.out_edges(v) {
            let mut path = GraphPath { start: v, edges: vec![first] };
            while index[g.end(&path)] == usize::MAX {
                let &[next] = g.out_edges(g.end(&path)) else {
                    return Err(Error::InvalidSource("ordinary vertex without a unique out-edge".into()));
                };
                path.edges.push(next);
                if path.edges.len() > g.edges.len() {
                    return Err(Error::GraphIsCycle);
                }
            }
            chains.push((word_of_path(g, &path)?, index[v], index[g.end(&path)]));
        }
    }
    chains.sort();
    let mut edges = Vec::with_capacity(chains.len());
    for (i, (w, tail, head)) in chains.into_iter().enumerate() {
        edges.push(SchemeEdge { number: i as u32 + 1, tail, head, word: occurrence(oracle, &w)? });
    }
    let s = Scheme::from_parts(g.k, vertices, edges)?;
    s.check_degrees()?;
    Ok(s)
}

/// Smallest `k ≥ k_min` with no bispecial factor of length `k` and `G_k` not a cycle.
pub fn find_clean_order(oracle: &mut FactorOracle, k_min: usize) -> Result<usize> {
    for k in k_min.max(1)..=k_min.max(1) + CLEAN_ORDER_SCAN {
        let g = build_rauzy_graph(oracle, k)?;
        let r = g.report();
        if !r.is_cycle && !r.collecting.iter().any(|v| r.distributing.contains(v)) {
            return Ok(k);
        }
    }
    Err(Error::HorizonExceeded {
        needed: (k_min + CLEAN_ORDER_SCAN + 1) as u64,
        cap: (k_min + CLEAN_ORDER_SCAN) as u64,
    })
}
