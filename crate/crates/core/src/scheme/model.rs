use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::Factor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    /// In-degree above one, out-degree one.
    Collecting,
    /// In-degree one, out-degree above one.
    Distributing,
}

/// A vertex and an occurrence in the word of its label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemeVertex {
    pub role: Role,
    pub label: Factor,
}

/// A numbered edge. Its word starts with the tail label and ends with the head label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemeEdge {
    pub number: u32,
    pub tail: usize,
    pub head: usize,
    pub word: Factor,
}

/// A graph with words: a multigraph of collecting and distributing vertices
/// whose edges carry words of the infinite word, numbered `1..=E`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SchemeRepr", into = "SchemeRepr")]
pub struct Scheme {
    k: usize,
    vertices: Vec<SchemeVertex>,
    edges: Vec<SchemeEdge>,
    out_edges: Vec<Vec<u32>>,
    in_edges: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchemeRepr {
    pub k: usize,
    pub vertices: Vec<SchemeVertex>,
    pub edges: Vec<SchemeEdge>,
}

impl TryFrom<SchemeRepr> for Scheme {
    type Error = Error;

    fn try_from(r: SchemeRepr) -> Result<Self> {
        let s = Scheme::from_parts(r.k, r.vertices, r.edges)?;
        s.check_degrees()?;
        Ok(s)
    }
}

impl From<Scheme> for SchemeRepr {
    fn from(s: Scheme) -> Self {
        SchemeRepr { k: s.k, vertices: s.vertices, edges: s.edges }
    }
}

impl Scheme {
    /// Checks endpoints, label and word consistency of lengths, and that the
    /// numbers are exactly `1..=E`; degree discipline is left to the validator.
    pub fn from_parts(k: usize, vertices: Vec<SchemeVertex>, mut edges: Vec<SchemeEdge>) -> Result<Self> {
        edges.sort_by_key(|e| e.number);
        for (i, e) in edges.iter().enumerate() {
            if e.number as usize != i + 1 {
                return Err(Error::InvalidArgument(format!("edge numbers must be 1..={}", edges.len())));
            }
            if e.tail >= vertices.len() || e.head >= vertices.len() {
                return Err(Error::InvalidArgument(format!("edge {} has an endpoint out of range", e.number)));
            }
            let lt = vertices[e.tail].label.len;
            let lh = vertices[e.head].label.len;
            if e.word.len < lt.max(lh) {
                return Err(Error::InvalidArgument(format!("edge {} is shorter than its end labels", e.number)));
            }
        }
        let mut out_edges = vec![Vec::new(); vertices.len()];
        let mut in_edges = vec![Vec::new(); vertices.len()];
        for e in &edges {
            out_edges[e.tail].push(e.number);
            in_edges[e.head].push(e.number);
        }
        Ok(Scheme { k, vertices, edges, out_edges, in_edges })
    }

    /// Collecting vertices have in-degree above one and out-degree one;
    /// distributing vertices the reverse.
    pub fn check_degrees(&self) -> Result<()> {
        for (v, x) in self.vertices.iter().enumerate() {
            let (i, o) = (self.in_edges[v].len(), self.out_edges[v].len());
            let ok = match x.role {
                Role::Collecting => i > 1 && o == 1,
                Role::Distributing => i == 1 && o > 1,
            };
            if !ok {
                return Err(Error::InvalidArgument(format!(
                    "vertex {v} is {:?} with in-degree {i} and out-degree {o}",
                    x.role
                )));
            }
        }
        Ok(())
    }

    /// Order of the Rauzy graph the scheme descends from.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &[SchemeVertex] {
        &self.vertices
    }

    /// Edges sorted by number.
    pub fn edges(&self) -> &[SchemeEdge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, number: u32) -> Result<&SchemeEdge> {
        number
            .checked_sub(1)
            .and_then(|i| self.edges.get(i as usize))
            .ok_or_else(|| Error::InvalidPath(format!("no edge numbered {number}")))
    }

    pub(crate) fn e(&self, number: u32) -> &SchemeEdge {
        &self.edges[number as usize - 1]
    }

    pub fn role(&self, v: usize) -> Role {
        self.vertices[v].role
    }

    pub fn label(&self, v: usize) -> Factor {
        self.vertices[v].label
    }

    /// Numbers of the edges leaving `v`, ascending.
    pub fn out_edges(&self, v: usize) -> &[u32] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[u32] {
        &self.in_edges[v]
    }

    pub fn is_collecting(&self, v: usize) -> bool {
        self.vertices[v].role == Role::Collecting
    }

    pub fn is_distributing(&self, v: usize) -> bool {
        self.vertices[v].role == Role::Distributing
    }

    /// Edges from a collecting to a distributing vertex, ascending.
    pub fn support_edges(&self) -> Vec<u32> {
        self.edges
            .iter()
            .filter(|e| self.is_collecting(e.tail) && self.is_distributing(e.head))
            .map(|e| e.number)
            .collect()
    }

    pub fn is_strongly_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                let next = if forward { &self.out_edges[v] } else { &self.in_edges[v] };
                for &num in next {
                    let e = self.e(num);
                    let w = if forward { e.head } else { e.tail };
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen.into_iter().all(|b| b)
        };
        reach(true) && reach(false)
    }

    /// Replaces one edge word; used to inject faults.
    pub fn with_edge_word(&self, number: u32, word: Factor) -> Result<Scheme> {
        let mut edges = self.edges.clone();
        self.edge(number)?;
        edges[number as usize - 1].word = word;
        Scheme::from_parts(self.k, self.vertices.clone(), edges)
    }
}
