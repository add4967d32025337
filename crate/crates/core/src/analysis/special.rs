use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::words::{FactorOracle, Letter, Word};

/// Left-, right- and bispecial factors of one length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialFactorReport {
    pub k: usize,
    pub left: Vec<Word>,
    pub right: Vec<Word>,
    pub bispecial: Vec<Word>,
}

pub fn special_factors(oracle: &mut FactorOracle, k: usize) -> Result<SpecialFactorReport> {
    let longer = oracle.factor_set(k + 1)?;
    let mut left_ext: BTreeMap<&[Letter], BTreeSet<Letter>> = BTreeMap::new();
    let mut right_ext: BTreeMap<&[Letter], BTreeSet<Letter>> = BTreeMap::new();
    for w in longer.iter() {
        right_ext.entry(&w[..k]).or_default().insert(w[k]);
        left_ext.entry(&w[1..]).or_default().insert(w[0]);
    }
    let special = |m: &BTreeMap<&[Letter], BTreeSet<Letter>>| -> Vec<Word> {
        m.iter().filter(|(_, ext)| ext.len() > 1).map(|(w, _)| w.to_vec()).collect()
    };
    let left = special(&left_ext);
    let right = special(&right_ext);
    let bispecial = left.iter().filter(|w| right.binary_search(w).is_ok()).cloned().collect();
    Ok(SpecialFactorReport { k, left, right, bispecial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::WordSource;

    fn rendered(o: &FactorOracle, ws: &[Word]) -> Vec<String> {
        ws.iter().map(|w| o.render(w)).collect()
    }

    #[test]
    fn fibonacci_orders() {
        let mut o = FactorOracle::new(WordSource::fibonacci()).unwrap();
        let r1 = special_factors(&mut o, 1).unwrap();
        assert_eq!(rendered(&o, &r1.left), ["a"]);
        assert_eq!(rendered(&o, &r1.right), ["a"]);
        assert_eq!(rendered(&o, &r1.bispecial), ["a"]);
        let r2 = special_factors(&mut o, 2).unwrap();
        assert_eq!(rendered(&o, &r2.left), ["ab"]);
        assert_eq!(rendered(&o, &r2.right), ["ba"]);
        assert!(r2.bispecial.is_empty());
    }

    #[test]
    fn periodic_word_has_no_special_factors() {
        let mut o = FactorOracle::new(WordSource::periodic("", "ab").unwrap()).unwrap();
        for k in 1..6 {
            let r = special_factors(&mut o, k).unwrap();
            assert!(r.left.is_empty() && r.right.is_empty() && r.bispecial.is_empty());
        }
    }
}
