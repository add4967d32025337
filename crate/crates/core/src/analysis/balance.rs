use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::words::{FactorOracle, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum BalanceVerdict {
    Balanced {
        up_to: usize,
    },
    /// `|u|_letter - |v|_letter ≥ 2` with `|u| = |v| = length`.
    Unbalanced {
        length: usize,
        letter: Letter,
        u: Word,
        v: Word,
    },
}

impl BalanceVerdict {
    pub fn is_balanced(&self) -> bool {
        matches!(self, BalanceVerdict::Balanced { .. })
    }
}

/// Checks every pair of factors of each length up to `n_max`.
///
/// The witness is the first offending length and letter, with the
/// lexicographically smallest factors of maximal and minimal letter count.
pub fn balance_check(oracle: &mut FactorOracle, n_max: usize) -> Result<BalanceVerdict> {
    let letters: Vec<Letter> = oracle.alphabet().letters().collect();
    for n in 1..=n_max {
        let set = oracle.factor_set(n)?;
        for &c in &letters {
            let count = |w: &Word| w.iter().filter(|&&l| l == c).count();
            let mut max: Option<(usize, &Word)> = None;
            let mut min: Option<(usize, &Word)> = None;
            for w in set.iter() {
                let k = count(w);
                if max.is_none_or(|(m, _)| k > m) {
                    max = Some((k, w));
                }
                if min.is_none_or(|(m, _)| k < m) {
                    min = Some((k, w));
                }
            }
            if let (Some((hi, u)), Some((lo, v))) = (max, min) {
                if hi >= lo + 2 {
                    return Ok(BalanceVerdict::Unbalanced { length: n, letter: c, u: u.clone(), v: v.clone() });
                }
            }
        }
    }
    Ok(BalanceVerdict::Balanced { up_to: n_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::WordSource;

    #[test]
    fn fibonacci_is_balanced() {
        let mut o = FactorOracle::new(WordSource::fibonacci()).unwrap();
        assert!(balance_check(&mut o, 20).unwrap().is_balanced());
    }

    #[test]
    fn thue_morse_witness() {
        let mut o = FactorOracle::new(WordSource::thue_morse()).unwrap();
        match balance_check(&mut o, 2).unwrap() {
            BalanceVerdict::Unbalanced { length, letter, u, v } => {
                assert_eq!((length, letter), (2, 0));
                assert_eq!((o.render(&u), o.render(&v)), ("aa".into(), "bb".into()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_word_is_balanced() {
        let mut o = FactorOracle::new(WordSource::periodic("", "a").unwrap()).unwrap();
        assert!(balance_check(&mut o, 12).unwrap().is_balanced());
    }
}
