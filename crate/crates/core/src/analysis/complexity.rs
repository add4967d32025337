use serde::{Deserialize, Serialize};

use super::FactorClasses;
use crate::error::{Error, Result};
use crate::words::FactorOracle;

/// `P(1..=N)`: number of distinct factors of each length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    pub values: Vec<u64>,
}

impl ComplexityProfile {
    pub fn max_length(&self) -> usize {
        self.values.len()
    }

    /// `P(n)` for `1 ≤ n ≤ N`.
    pub fn p(&self, n: usize) -> u64 {
        self.values[n - 1]
    }

    /// `P(n+1) - P(n)` for `1 ≤ n < N`.
    pub fn differences(&self) -> Vec<i64> {
        self.values.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect()
    }

    pub fn to_csv(&self) -> String {
        let diffs = self.differences();
        let mut out = String::from("N,P,diff\n");
        for (i, v) in self.values.iter().enumerate() {
            let d = diffs.get(i).map(|d| d.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{}\n", i + 1, v, d));
        }
        out
    }
}

/// Exact factor complexity up to length `n_max`, from a certified prefix.
pub fn complexity_profile(oracle: &mut FactorOracle, n_max: usize) -> Result<ComplexityProfile> {
    let pc = oracle
        .prefix_certificate(n_max)?
        .ok_or(Error::HorizonExceeded { needed: u64::MAX, cap: oracle.config().buffer_cap as u64 })?;
    if pc > oracle.config().buffer_cap as u64 {
        return Err(Error::HorizonExceeded { needed: pc, cap: oracle.config().buffer_cap as u64 });
    }
    let pc = (pc as usize).max(n_max);
    oracle.ensure_prefix(pc)?;
    let mut classes = FactorClasses::new(&oracle.buffer()[..pc]);
    let mut values = Vec::with_capacity(n_max);
    while classes.len() < n_max && classes.advance() {
        values.push(classes.count() as u64);
    }
    Ok(ComplexityProfile { values })
}

/// Largest observed `P(n+1) - P(n)`; `None` for profiles shorter than two.
pub fn first_difference_bound(profile: &ComplexityProfile) -> Option<u64> {
    profile.differences().into_iter().max().map(|d| d.max(0) as u64)
}

/// `P₂(1..=N)` measured over the materialized buffer.
///
/// `values[n-1]` is the least `L` such that every buffer window of length `L`
/// contains every factor of length `n`; `None` where the factor set could not
/// be certified or the value exceeds half the buffer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceProfile {
    pub values: Vec<Option<u64>>,
    pub buffer_len: u64,
}

impl RecurrenceProfile {
    pub fn p2(&self, n: usize) -> Option<u64> {
        self.values[n - 1]
    }

    /// Largest `P₂(n) / n` over defined entries.
    pub fn max_ratio(&self) -> Option<crate::Real> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| v as crate::Real / (i + 1) as crate::Real))
            .fold(None, |acc: Option<crate::Real>, r| Some(acc.map_or(r, |a| a.max(r))))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,P2\n");
        for (i, v) in self.values.iter().enumerate() {
            let cell = v.map(|v| v.to_string()).unwrap_or_else(|| "undefined".into());
            out.push_str(&format!("{},{}\n", i + 1, cell));
        }
        out
    }
}

const MIN_RECURRENCE_BUFFER: u64 = 1 << 14;

pub fn recurrence_exponent(oracle: &mut FactorOracle, n_max: usize) -> RecurrenceProfile {
    let cap = oracle.config().buffer_cap as u64;
    let pc = oracle.prefix_certificate(n_max).ok().flatten();
    let wc = oracle.window_certificate(n_max).ok().flatten();
    let mut t = MIN_RECURRENCE_BUFFER.max(pc.unwrap_or(0)).max(wc.unwrap_or(0).saturating_mul(4)).min(cap);
    if oracle.ensure_prefix(t as usize).is_err() {
        t = oracle.buffer().len() as u64;
    }
    let certified = pc.is_some_and(|pc| pc <= t);
    let text = &oracle.buffer()[..t as usize];
    let mut classes = FactorClasses::new(text);
    let mut values = Vec::with_capacity(n_max);
    while classes.len() < n_max && classes.advance() {
        let n = classes.len() as u64;
        let mut first = vec![u64::MAX; classes.count()];
        let mut last = vec![0u64; classes.count()];
        let mut widest = n;
        for (i, &id) in classes.ids().iter().enumerate() {
            let i = i as u64;
            let id = id as usize;
            if first[id] == u64::MAX {
                first[id] = i;
                widest = widest.max(i + n);
            } else {
                widest = widest.max(i - last[id] + n - 1);
            }
            last[id] = i;
        }
        for &l in &last {
            widest = widest.max(t - l);
        }
        let defined = certified && widest <= t / 2;
        values.push(defined.then_some(widest));
    }
    values.resize(n_max, None);
    RecurrenceProfile { values, buffer_len: t }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{Morphism, WordSource};

    #[test]
    fn fibonacci_is_sturmian() {
        let mut o = FactorOracle::new(WordSource::fibonacci()).unwrap();
        let p = complexity_profile(&mut o, 10).unwrap();
        assert_eq!(p.values, (2..=11).collect::<Vec<u64>>());
        assert_eq!(first_difference_bound(&p), Some(1));
    }

    #[test]
    fn thue_morse_profile() {
        let mut o = FactorOracle::new(WordSource::thue_morse()).unwrap();
        assert_eq!(complexity_profile(&mut o, 4).unwrap().values, vec![2, 4, 6, 10]);
        assert_eq!(first_difference_bound(&complexity_profile(&mut o, 30).unwrap()), Some(4));
    }

    #[test]
    fn periodic_profile_is_flat() {
        let mut o = FactorOracle::new(WordSource::periodic("", "ab").unwrap()).unwrap();
        let p = complexity_profile(&mut o, 5).unwrap();
        assert_eq!(p.values, vec![2; 5]);
        assert_eq!(first_difference_bound(&p), Some(0));
        assert!(p.to_csv().starts_with("N,P,diff\n1,2,0\n"));
    }

    #[test]
    fn uncertified_source_is_horizon() {
        let phi = Morphism::from_rules(&[('a', "ab"), ('b', "b")]).unwrap();
        let mut o = FactorOracle::new(WordSource::purely_morphic(phi, 0).unwrap()).unwrap();
        assert!(complexity_profile(&mut o, 3).unwrap_err().is_horizon());
    }

    #[test]
    fn recurrence_examples() {
        let mut ab = FactorOracle::new(WordSource::periodic("", "ab").unwrap()).unwrap();
        assert_eq!(recurrence_exponent(&mut ab, 1).p2(1), Some(2));
        let mut aaa = FactorOracle::new(WordSource::periodic("", "a").unwrap()).unwrap();
        assert_eq!(recurrence_exponent(&mut aaa, 3).p2(3), Some(3));
        let mut fib = FactorOracle::new(WordSource::fibonacci()).unwrap();
        let r = recurrence_exponent(&mut fib, 20);
        assert!(r.values.iter().all(|v| v.is_some()));
        assert!(r.max_ratio().unwrap() <= 5.0);
    }
}
