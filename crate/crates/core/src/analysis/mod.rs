//! Factor complexity, recurrence, special factors, balance and the decision probes.

pub mod balance;
pub mod complexity;
pub mod probes;
pub mod special;

pub use balance::{balance_check, BalanceVerdict};
pub use complexity::{
    complexity_profile, first_difference_bound, recurrence_exponent, ComplexityProfile, RecurrenceProfile,
};
pub use probes::{
    minimal_period_pair, periodicity_probe, uniform_recurrence_probe, PeriodicityVerdict, UniformRecurrenceVerdict,
};
pub use special::{special_factors, SpecialFactorReport};

use std::collections::HashMap;

use crate::words::Letter;

/// Dense ids of the length-`n` factors starting at each position of a text,
/// refined one length at a time.
pub(crate) struct FactorClasses<'a> {
    text: &'a [Letter],
    ids: Vec<u32>,
    n: usize,
    count: usize,
}

impl<'a> FactorClasses<'a> {
    pub(crate) fn new(text: &'a [Letter]) -> Self {
        FactorClasses { text, ids: vec![0; text.len() + 1], n: 0, count: 1 }
    }

    /// Moves to the next length; false once factors no longer fit.
    pub(crate) fn advance(&mut self) -> bool {
        let n = self.n + 1;
        if n > self.text.len() {
            return false;
        }
        let positions = self.text.len() - n + 1;
        let mut map: HashMap<u64, u32> = HashMap::with_capacity(self.count * 2);
        let mut next = Vec::with_capacity(positions);
        for i in 0..positions {
            let key = ((self.ids[i] as u64) << 8) | self.text[i + n - 1] as u64;
            let fresh = map.len() as u32;
            next.push(*map.entry(key).or_insert(fresh));
        }
        self.count = map.len();
        self.ids = next;
        self.n = n;
        true
    }

    pub(crate) fn len(&self) -> usize {
        self.n
    }

    pub(crate) fn count(&self) -> usize {
        self.count
    }

    pub(crate) fn ids(&self) -> &[u32] {
        &self.ids
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_count_distinct_factors() {
        let text = [0u8, 1, 0, 0, 1, 0, 1, 0];
        let mut c = FactorClasses::new(&text);
        let mut counts = Vec::new();
        while c.advance() {
            counts.push(c.count());
        }
        let brute: Vec<usize> =
            (1..=text.len()).map(|n| text.windows(n).collect::<std::collections::HashSet<_>>().len()).collect();
        assert_eq!(counts, brute);
    }
}
