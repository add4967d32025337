use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scheme::{Role, Scheme};

use super::evolve::EdgeKey;

/// A scheme without words: roles and numbered edges.
///
/// Vertices are listed in the order of their lowest-numbered out-edge, so
/// equal structures have equal values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LightScheme {
    pub roles: Vec<Role>,
    /// `edges[i] = (tail, head)` of edge `i + 1`.
    pub edges: Vec<(usize, usize)>,
}

impl LightScheme {
    pub fn of(s: &Scheme) -> Self {
        let n = s.vertex_count();
        let mut first_out = vec![u32::MAX; n];
        for e in s.edges() {
            first_out[e.tail] = first_out[e.tail].min(e.number);
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (first_out[v], v));
        let mut rank = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        LightScheme {
            roles: order.iter().map(|&v| s.role(v)).collect(),
            edges: s.edges().iter().map(|e| (rank[e.tail], rank[e.head])).collect(),
        }
    }

    pub fn support_edges(&self) -> Vec<u32> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(t, h))| self.roles[t] == Role::Collecting && self.roles[h] == Role::Distributing)
            .map(|(i, _)| i as u32 + 1)
            .collect()
    }
}

/// How edges are numbered after a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Renumbering {
    /// Surviving edges in their old order, then new edges by `(e, f)`;
    /// a merged edge takes its smallest key.
    SurvivorsThenNew,
}

impl Renumbering {
    /// New number of each key, compacted to `1..=E`.
    pub fn apply(&self, keys: &[EdgeKey]) -> Vec<u32> {
        match self {
            Renumbering::SurvivorsThenNew => {
                let mut order: Vec<usize> = (0..keys.len()).collect();
                order.sort_by_key(|&i| keys[i]);
                let mut out = vec![0u32; keys.len()];
                for (rank, &i) in order.iter().enumerate() {
                    out[i] = rank as u32 + 1;
                }
                out
            }
        }
    }
}

/// Lowest-numbered support edge, with the survivors-then-new renumbering.
pub fn evolution_method(l: &LightScheme) -> Result<(u32, Renumbering)> {
    let support = l.support_edges().into_iter().min().ok_or(Error::NoSupportEdge)?;
    Ok((support, Renumbering::SurvivorsThenNew))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn light(roles: &[Role], edges: &[(usize, usize)]) -> LightScheme {
        LightScheme { roles: roles.to_vec(), edges: edges.to_vec() }
    }

    #[test]
    fn lowest_support_edge() {
        use Role::*;
        let l = light(&[Collecting, Distributing], &[(0, 1), (1, 0), (1, 0)]);
        assert_eq!(evolution_method(&l).unwrap().0, 1);
        let two = light(
            &[Collecting, Distributing, Collecting, Distributing],
            &[(1, 0), (0, 3), (3, 2), (1, 2), (2, 1), (3, 0)],
        );
        assert_eq!(two.support_edges(), vec![2, 5]);
        assert_eq!(evolution_method(&two).unwrap().0, 2);
        assert_eq!(evolution_method(&light(&[Distributing], &[])), Err(Error::NoSupportEdge));
    }

    #[test]
    fn renumbering_is_a_bijection() {
        let keys = [EdgeKey::New(2, 3), EdgeKey::Surviving(4), EdgeKey::Surviving(1), EdgeKey::New(1, 9)];
        let r = Renumbering::SurvivorsThenNew.apply(&keys);
        assert_eq!(r, vec![4, 2, 1, 3]);
        assert_eq!(Renumbering::SurvivorsThenNew.apply(&keys), r);
    }
}
