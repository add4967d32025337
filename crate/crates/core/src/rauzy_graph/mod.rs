//! The order-`k` Rauzy graph `G_k` and the word/path correspondence.

mod dot;

pub use dot::to_dot;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{FactorOracle, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RauzyEdge {
    pub word: Word,
    pub tail: usize,
    pub head: usize,
}

/// Vertices are the length-`k` factors, edges the length-`k+1` factors, both sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RauzyGraph {
    pub k: usize,
    pub vertices: Vec<Word>,
    pub edges: Vec<RauzyEdge>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

/// A walk given by its start vertex and edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphPath {
    pub start: usize,
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphReport {
    /// In-degree greater than one.
    pub collecting: Vec<usize>,
    /// Out-degree greater than one.
    pub distributing: Vec<usize>,
    pub strongly_connected: bool,
    pub is_cycle: bool,
}

impl GraphReport {
    /// Vertices with in- or out-degree greater than one.
    pub fn special(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.collecting.iter().chain(&self.distributing).copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    }
}

pub fn build_rauzy_graph(oracle: &mut FactorOracle, k: usize) -> Result<RauzyGraph> {
    let vertices = oracle.factor_set(k)?.as_ref().clone();
    let words = oracle.factor_set(k + 1)?;
    let mut edges = Vec::with_capacity(words.len());
    for w in words.iter() {
        let tail = vertices
            .binary_search_by(|v| v.as_slice().cmp(&w[..k]))
            .map_err(|_| Error::InvalidSource(format!("edge prefix of length {k} missing from the factor set")))?;
        let head = vertices
            .binary_search_by(|v| v.as_slice().cmp(&w[1..]))
            .map_err(|_| Error::InvalidSource(format!("edge suffix of length {k} missing from the factor set")))?;
        edges.push(RauzyEdge { word: w.clone(), tail, head });
    }
    Ok(RauzyGraph::from_parts(k, vertices, edges))
}

impl RauzyGraph {
    fn from_parts(k: usize, vertices: Vec<Word>, edges: Vec<RauzyEdge>) -> Self {
        let mut out_edges = vec![Vec::new(); vertices.len()];
        let mut in_edges = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.tail].push(i);
            in_edges[e.head].push(i);
        }
        RauzyGraph { k, vertices, edges, out_edges, in_edges }
    }

    pub fn vertex_id(&self, w: &[Letter]) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_slice().cmp(w)).ok()
    }

    pub fn edge_id(&self, w: &[Letter]) -> Option<usize> {
        self.edges.binary_search_by(|e| e.word.as_slice().cmp(w)).ok()
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn is_distributing(&self, v: usize) -> bool {
        self.out_edges[v].len() > 1
    }

    pub fn is_collecting(&self, v: usize) -> bool {
        self.in_edges[v].len() > 1
    }

    fn reach(&self, forward: bool) -> usize {
        if self.vertices.is_empty() {
            return 0;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            let next = if forward { &self.out_edges[v] } else { &self.in_edges[v] };
            for &e in next {
                let w = if forward { self.edges[e].head } else { self.edges[e].tail };
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count
    }

    pub fn is_strongly_connected(&self) -> bool {
        let n = self.vertices.len();
        n > 0 && self.reach(true) == n && self.reach(false) == n
    }

    /// Strongly connected with every in- and out-degree equal to one.
    pub fn is_cycle(&self) -> bool {
        self.is_strongly_connected()
            && (0..self.vertices.len()).all(|v| self.in_edges[v].len() == 1 && self.out_edges[v].len() == 1)
    }

    pub fn report(&self) -> GraphReport {
        let n = self.vertices.len();
        GraphReport {
            collecting: (0..n).filter(|&v| self.is_collecting(v)).collect(),
            distributing: (0..n).filter(|&v| self.is_distributing(v)).collect(),
            strongly_connected: self.is_strongly_connected(),
            is_cycle: self.is_cycle(),
        }
    }

    /// Vertex where the path ends.
    pub fn end(&self, p: &GraphPath) -> usize {
        p.edges.last().map_or(p.start, |&e| self.edges[e].head)
    }

    pub fn check_path(&self, p: &GraphPath) -> Result<()> {
        if p.start >= self.vertices.len() {
            return Err(Error::InvalidPath(format!("no vertex {}", p.start)));
        }
        let mut at = p.start;
        for &e in &p.edges {
            let edge = self.edges.get(e).ok_or_else(|| Error::InvalidPath(format!("no edge {e}")))?;
            if edge.tail != at {
                return Err(Error::InvalidPath(format!("edge {e} does not leave vertex {at}")));
            }
            at = edge.head;
        }
        Ok(())
    }

    /// Minimal extension ending at a distributing vertex (right) or starting
    /// at a collecting vertex (left).
    pub fn natural_extension(&self, p: &GraphPath, dir: Direction) -> Result<GraphPath> {
        self.check_path(p)?;
        let mut out = p.clone();
        let mut steps = 0;
        match dir {
            Direction::Right => {
                while !self.is_distributing(self.end(&out)) {
                    let &[e] = self.out_edges[self.end(&out)].as_slice() else {
                        return Err(Error::InvalidPath("dead end".into()));
                    };
                    out.edges.push(e);
                    steps += 1;
                    if steps > self.edges.len() {
                        return Err(Error::GraphIsCycle);
                    }
                }
            }
            Direction::Left => {
                while !self.is_collecting(out.start) {
                    let &[e] = self.in_edges[out.start].as_slice() else {
                        return Err(Error::InvalidPath("dead end".into()));
                    };
                    out.edges.insert(0, e);
                    out.start = self.edges[e].tail;
                    steps += 1;
                    if steps > self.edges.len() {
                        return Err(Error::GraphIsCycle);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Word of the right natural extension, without the first `k` letters
    /// when the path starts at a distributing vertex.
    pub fn front_word(&self, p: &GraphPath) -> Result<Word> {
        let ext = self.natural_extension(p, Direction::Right)?;
        let w = word_of_path(self, &ext)?;
        Ok(if self.is_distributing(p.start) { w[self.k..].to_vec() } else { w })
    }

    /// Word of the left natural extension, without the last `k` letters when
    /// the path ends at a collecting vertex.
    pub fn back_word(&self, p: &GraphPath) -> Result<Word> {
        let ext = self.natural_extension(p, Direction::Left)?;
        let w = word_of_path(self, &ext)?;
        Ok(if self.is_collecting(self.end(p)) { w[..w.len() - self.k].to_vec() } else { w })
    }
}

pub fn path_of_word(g: &RauzyGraph, w: &[Letter]) -> Result<GraphPath> {
    let k = g.k;
    if w.len() < k {
        return Err(Error::NotAFactorPath {
            k,
            reason: format!("word of length {} is shorter than the order", w.len()),
        });
    }
    let start =
        g.vertex_id(&w[..k]).ok_or_else(|| Error::NotAFactorPath { k, reason: "prefix is not a vertex".into() })?;
    let edges = w
        .windows(k + 1)
        .enumerate()
        .map(|(i, win)| {
            g.edge_id(win).ok_or_else(|| Error::NotAFactorPath { k, reason: format!("window at {i} is not an edge") })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GraphPath { start, edges })
}

pub fn word_of_path(g: &RauzyGraph, p: &GraphPath) -> Result<Word> {
    g.check_path(p)?;
    let mut w = g.vertices[p.start].clone();
    w.extend(p.edges.iter().map(|&e| g.edges[e].word[g.k]));
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::WordSource;

    fn fib(k: usize) -> (FactorOracle, RauzyGraph) {
        let mut o = FactorOracle::new(WordSource::fibonacci()).unwrap();
        let g = build_rauzy_graph(&mut o, k).unwrap();
        (o, g)
    }

    fn words(o: &FactorOracle, ws: impl IntoIterator<Item = Word>) -> Vec<String> {
        ws.into_iter().map(|w| o.render(&w)).collect()
    }

    #[test]
    fn fibonacci_graphs() {
        let (o, g1) = fib(1);
        assert_eq!(words(&o, g1.vertices.clone()), ["a", "b"]);
        assert_eq!(words(&o, g1.edges.iter().map(|e| e.word.clone())), ["aa", "ab", "ba"]);
        let r = g1.report();
        assert_eq!((r.collecting.as_slice(), r.distributing.as_slice()), (&[0usize][..], &[0usize][..]));
        let (o, g2) = fib(2);
        assert_eq!(words(&o, g2.vertices.clone()), ["aa", "ab", "ba"]);
        assert_eq!(words(&o, g2.edges.iter().map(|e| e.word.clone())), ["aab", "aba", "baa", "bab"]);
        let r = g2.report();
        assert_eq!(words(&o, r.collecting.iter().map(|&v| g2.vertices[v].clone())), ["ab"]);
        assert_eq!(words(&o, r.distributing.iter().map(|&v| g2.vertices[v].clone())), ["ba"]);
        assert!(r.strongly_connected && !r.is_cycle);
    }

    #[test]
    fn periodic_graph_is_cycle() {
        let mut o = FactorOracle::new(WordSource::periodic("", "ab").unwrap()).unwrap();
        let g = build_rauzy_graph(&mut o, 1).unwrap();
        assert_eq!((g.vertices.len(), g.edges.len()), (2, 2));
        assert!(g.is_cycle());
    }

    #[test]
    fn words_and_paths() {
        let (o, g) = fib(2);
        let p = path_of_word(&g, &o.parse("abaab").unwrap()).unwrap();
        assert_eq!(words(&o, p.edges.iter().map(|&e| g.edges[e].word.clone())), ["aba", "baa", "aab"]);
        assert_eq!(o.render(&word_of_path(&g, &p).unwrap()), "abaab");
        let empty = path_of_word(&g, &o.parse("ba").unwrap()).unwrap();
        assert!(empty.edges.is_empty());
        assert!(matches!(path_of_word(&g, &o.parse("bb").unwrap()), Err(Error::NotAFactorPath { .. })));
        assert!(matches!(path_of_word(&g, &o.parse("a").unwrap()), Err(Error::NotAFactorPath { .. })));
    }

    #[test]
    fn natural_extensions() {
        let (o, g) = fib(2);
        let bab = path_of_word(&g, &o.parse("bab").unwrap()).unwrap();
        let right = g.natural_extension(&bab, Direction::Right).unwrap();
        assert_eq!(o.render(&word_of_path(&g, &right).unwrap()), "baba");
        let left = g.natural_extension(&bab, Direction::Left).unwrap();
        assert_eq!(o.render(&word_of_path(&g, &left).unwrap()), "abab");
        let aba = path_of_word(&g, &o.parse("aba").unwrap()).unwrap();
        assert_eq!(g.natural_extension(&aba, Direction::Right).unwrap(), aba);
        assert_eq!(o.render(&g.front_word(&bab).unwrap()), "ba");
        assert_eq!(o.render(&g.back_word(&bab).unwrap()), "ab");
    }
}
