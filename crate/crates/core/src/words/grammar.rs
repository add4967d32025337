//! Hierarchical descriptions of infinite words giving random access to letters,
//! ranges and range hashes at positions far beyond any materialized prefix.

use super::alphabet::{Letter, Word};
use super::hash::Hashed;
use super::source::{Convention, DigitStream, WordSource};
use crate::error::{Error, Result};

/// Most levels built for slowly growing morphisms.
const MAX_LEVELS: usize = 4096;

#[derive(Debug, Clone)]
pub(crate) enum Grammar {
    Morphic(MorphicGrammar),
    Sturmian(SturmianGrammar),
    Periodic(PeriodicGrammar),
}

/// Node `(j, c)` stands for `ψ(φʲ(c))`.
#[derive(Debug, Clone)]
pub(crate) struct MorphicGrammar {
    images: Vec<Word>,
    coding: Vec<Word>,
    seed: Letter,
    levels: Vec<Vec<Hashed>>,
    extent: u64,
}

/// Node `n` stands for the standard word `sₙ`, stored at index `n + 1`.
#[derive(Debug, Clone)]
pub(crate) struct SturmianGrammar {
    reps: Vec<u64>,
    nodes: Vec<Hashed>,
    extent: u64,
}

#[derive(Debug, Clone)]
pub(crate) struct PeriodicGrammar {
    pre: Word,
    per: Word,
    pre_hash: Hashed,
    per_hash: Hashed,
    extent: u64,
}

impl Grammar {
    pub(crate) fn new(source: &WordSource, cap: u64) -> Result<Self> {
        source.validate()?;
        Ok(match source {
            WordSource::PurelyMorphic { morphism, seed } => {
                let id: Vec<Word> = (0..morphism.domain().len()).map(|c| vec![c as Letter]).collect();
                Grammar::Morphic(MorphicGrammar::new(morphism.images().to_vec(), id, *seed, cap))
            }
            WordSource::Morphic { morphism, seed, coding } => {
                Grammar::Morphic(MorphicGrammar::new(morphism.images().to_vec(), coding.images().to_vec(), *seed, cap))
            }
            WordSource::SturmianCF { digits, convention } => {
                Grammar::Sturmian(SturmianGrammar::new(digits, *convention, cap))
            }
            WordSource::EventuallyPeriodic { preperiod, period, .. } => Grammar::Periodic(PeriodicGrammar {
                pre: preperiod.clone(),
                per: period.clone(),
                pre_hash: Hashed::of_letters(preperiod),
                per_hash: Hashed::of_letters(period),
                extent: cap,
            }),
        })
    }

    /// Positions below the extent are addressable.
    pub(crate) fn extent(&self) -> u64 {
        match self {
            Grammar::Morphic(g) => g.extent,
            Grammar::Sturmian(g) => g.extent,
            Grammar::Periodic(g) => g.extent,
        }
    }

    fn check(&self, end: u64) -> Result<()> {
        if end > self.extent() {
            Err(Error::HorizonExceeded { needed: end, cap: self.extent() })
        } else {
            Ok(())
        }
    }

    pub(crate) fn prefix_hash(&self, p: u64) -> Result<Hashed> {
        self.check(p)?;
        Ok(match self {
            Grammar::Morphic(g) => g.prefix_hash(p),
            Grammar::Sturmian(g) => g.prefix_hash(p),
            Grammar::Periodic(g) => g.prefix_hash(p),
        })
    }

    pub(crate) fn hash_range(&self, pos: u64, len: u64) -> Result<Hashed> {
        let end = pos.checked_add(len).ok_or(Error::HorizonExceeded { needed: u64::MAX, cap: self.extent() })?;
        let whole = self.prefix_hash(end)?;
        let pre = self.prefix_hash(pos)?;
        Ok(whole.strip_prefix(pre))
    }

    pub(crate) fn letter_at(&self, p: u64) -> Result<Letter> {
        self.check(p + 1)?;
        let mut out = Vec::with_capacity(1);
        self.write_range(p, 1, &mut out)?;
        Ok(out[0])
    }

    pub(crate) fn write_range(&self, pos: u64, len: u64, out: &mut Vec<Letter>) -> Result<()> {
        let end = pos.checked_add(len).ok_or(Error::HorizonExceeded { needed: u64::MAX, cap: self.extent() })?;
        self.check(end)?;
        if len == 0 {
            return Ok(());
        }
        match self {
            Grammar::Morphic(g) => g.write_range(pos, end, out),
            Grammar::Sturmian(g) => g.write_range(pos, end, out),
            Grammar::Periodic(g) => g.write_range(pos, end, out),
        }
        Ok(())
    }

    /// Coded length of `ψ(φʲ(c))`, if that level was built.
    pub(crate) fn morphic_len(&self, j: usize, c: Letter) -> Option<u64> {
        match self {
            Grammar::Morphic(g) => g.levels.get(j).map(|lv| lv[c as usize].len),
            _ => None,
        }
    }

    /// Length of `sₙ`, `n ≥ -1`, if built.
    pub(crate) fn sturmian_len(&self, n: i64) -> Option<u64> {
        match self {
            Grammar::Sturmian(g) => g.nodes.get((n + 1) as usize).map(|h| h.len),
            _ => None,
        }
    }
}

impl MorphicGrammar {
    fn new(images: Vec<Word>, coding: Vec<Word>, seed: Letter, cap: u64) -> Self {
        let mut levels = vec![coding.iter().map(|w| Hashed::of_letters(w)).collect::<Vec<_>>()];
        while levels.last().expect("nonempty")[seed as usize].len < cap && levels.len() < MAX_LEVELS {
            let prev = levels.last().expect("nonempty");
            if prev.iter().any(|h| h.len >= u64::MAX / 64) {
                break;
            }
            let next: Vec<Hashed> = images
                .iter()
                .map(|img| img.iter().fold(Hashed::EMPTY, |acc, &d| acc.concat(prev[d as usize])))
                .collect();
            levels.push(next);
        }
        let top = levels.last().expect("nonempty")[seed as usize].len;
        MorphicGrammar { images, coding, seed, levels, extent: top.min(cap) }
    }

    fn top_level(&self, p: u64) -> usize {
        self.levels.iter().position(|lv| lv[self.seed as usize].len >= p).expect("checked against extent")
    }

    fn prefix_hash(&self, p: u64) -> Hashed {
        let mut j = self.top_level(p);
        let mut c = self.seed;
        let mut r = p;
        let mut acc = Hashed::EMPTY;
        'outer: while r > 0 {
            let node = self.levels[j][c as usize];
            if r == node.len {
                acc = acc.concat(node);
                break;
            }
            if j == 0 {
                acc = acc.concat(Hashed::of_letters(&self.coding[c as usize][..r as usize]));
                break;
            }
            for &d in &self.images[c as usize] {
                let child = self.levels[j - 1][d as usize];
                if r >= child.len {
                    acc = acc.concat(child);
                    r -= child.len;
                } else {
                    j -= 1;
                    c = d;
                    continue 'outer;
                }
            }
            break;
        }
        acc
    }

    fn write_range(&self, lo: u64, hi: u64, out: &mut Vec<Letter>) {
        let j = self.top_level(hi);
        self.emit(j, self.seed, 0, lo, hi, out);
    }

    fn emit(&self, j: usize, c: Letter, start: u64, lo: u64, hi: u64, out: &mut Vec<Letter>) {
        let len = self.levels[j][c as usize].len;
        let end = start.saturating_add(len);
        if end <= lo || start >= hi {
            return;
        }
        if j == 0 {
            for (i, &l) in self.coding[c as usize].iter().enumerate() {
                let p = start + i as u64;
                if p >= lo && p < hi {
                    out.push(l);
                }
            }
            return;
        }
        let mut s = start;
        for &d in &self.images[c as usize] {
            let l = self.levels[j - 1][d as usize].len;
            if s >= hi {
                break;
            }
            if s.saturating_add(l) > lo {
                self.emit(j - 1, d, s, lo, hi, out);
            }
            s = s.saturating_add(l);
        }
    }
}

impl SturmianGrammar {
    fn new(digits: &DigitStream, convention: Convention, cap: u64) -> Self {
        let b = Hashed::of_letters(&[1]);
        let a = Hashed::of_letters(&[0]);
        let mut nodes = vec![b, a];
        let mut reps = vec![0, 0];
        let mut n = 1usize;
        while (nodes.len() < 3 || nodes.last().expect("nonempty").len < cap) && nodes.len() < MAX_LEVELS {
            let d = digits.digit(n);
            let r = if n == 1 && convention == Convention::Gauss { d - 1 } else { d };
            let prev = nodes[n];
            let prev2 = nodes[n - 1];
            let lenr = prev.len.saturating_mul(r).saturating_add(prev2.len);
            if lenr >= u64::MAX / 4 {
                break;
            }
            nodes.push(prev.repeat(r).concat(prev2));
            reps.push(r);
            n += 1;
        }
        let top = nodes.last().expect("nonempty").len;
        SturmianGrammar { reps, nodes, extent: top.min(cap) }
    }

    fn top(&self, p: u64) -> usize {
        (2..self.nodes.len()).find(|&i| self.nodes[i].len >= p).unwrap_or(self.nodes.len() - 1)
    }

    fn prefix_hash(&self, p: u64) -> Hashed {
        let mut i = self.top(p);
        let mut r = p;
        let mut acc = Hashed::EMPTY;
        while r > 0 {
            let node = self.nodes[i];
            if r == node.len {
                acc = acc.concat(node);
                break;
            }
            // single letters are taken whole, so i >= 2
            let l1 = self.nodes[i - 1].len;
            let q = (r / l1).min(self.reps[i]);
            acc = acc.concat(self.nodes[i - 1].repeat(q));
            r -= q * l1;
            if r == 0 {
                break;
            }
            i = if q < self.reps[i] { i - 1 } else { i - 2 };
        }
        acc
    }

    fn write_range(&self, lo: u64, hi: u64, out: &mut Vec<Letter>) {
        let i = self.top(hi);
        self.emit(i, 0, lo, hi, out);
    }

    fn emit(&self, i: usize, start: u64, lo: u64, hi: u64, out: &mut Vec<Letter>) {
        let len = self.nodes[i].len;
        if start.saturating_add(len) <= lo || start >= hi {
            return;
        }
        if i < 2 {
            out.push(if i == 0 { 1 } else { 0 });
            return;
        }
        let l1 = self.nodes[i - 1].len;
        let reps = self.reps[i];
        let first = if lo > start { ((lo - start) / l1).min(reps) } else { 0 };
        let mut s = start + first * l1;
        for _ in first..reps {
            if s >= hi {
                return;
            }
            self.emit(i - 1, s, lo, hi, out);
            s += l1;
        }
        self.emit(i - 2, s, lo, hi, out);
    }
}

impl PeriodicGrammar {
    fn prefix_hash(&self, p: u64) -> Hashed {
        let lp = self.pre.len() as u64;
        if p <= lp {
            return Hashed::of_letters(&self.pre[..p as usize]);
        }
        let r = p - lp;
        let n = self.per.len() as u64;
        self.pre_hash.concat(self.per_hash.repeat(r / n)).concat(Hashed::of_letters(&self.per[..(r % n) as usize]))
    }

    fn letter(&self, p: u64) -> Letter {
        let lp = self.pre.len() as u64;
        if p < lp {
            self.pre[p as usize]
        } else {
            self.per[((p - lp) % self.per.len() as u64) as usize]
        }
    }

    fn write_range(&self, lo: u64, hi: u64, out: &mut Vec<Letter>) {
        out.extend((lo..hi).map(|p| self.letter(p)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::morphism::Morphism;

    fn naive_fixed_point(phi: &Morphism, n: usize) -> Word {
        let mut w = vec![0];
        while w.len() < n {
            w = phi.apply(&w).unwrap();
        }
        w.truncate(n);
        w
    }

    #[test]
    fn morphic_ranges_and_hashes_match_naive() {
        for src in [WordSource::fibonacci(), WordSource::thue_morse(), WordSource::tribonacci()] {
            let (phi, _, _) = src.morphic_parts().unwrap();
            let w = naive_fixed_point(phi, 3000);
            let g = Grammar::new(&src, 1 << 62).unwrap();
            for &(pos, len) in &[(0u64, 10u64), (7, 100), (1234, 999), (2999, 1), (0, 3000)] {
                let mut out = Vec::new();
                g.write_range(pos, len, &mut out).unwrap();
                assert_eq!(&out[..], &w[pos as usize..(pos + len) as usize]);
                let h = g.hash_range(pos, len).unwrap();
                assert_eq!(h, Hashed::of_letters(&out));
            }
            assert_eq!(g.letter_at(2500).unwrap(), w[2500]);
        }
    }

    #[test]
    fn sturmian_matches_fibonacci() {
        let g = Grammar::new(&WordSource::sturmian(DigitStream::constant(1)), 1 << 62).unwrap();
        let w = naive_fixed_point(&Morphism::fibonacci(), 5000);
        let mut out = Vec::new();
        g.write_range(0, 5000, &mut out).unwrap();
        assert_eq!(out, w);
        assert_eq!(g.hash_range(321, 1000).unwrap(), Hashed::of_letters(&w[321..1321]));
    }

    #[test]
    fn sturmian_gauss_convention() {
        // slope [0; 2, 1, 1, ...]: s1 = a b, s2 = s1 s0 = aba, ...
        let src = WordSource::SturmianCF {
            digits: DigitStream::Periodic { preperiod: vec![2], period: vec![1] },
            convention: Convention::Gauss,
        };
        let g = Grammar::new(&src, 1 << 62).unwrap();
        let mut out = Vec::new();
        g.write_range(0, 8, &mut out).unwrap();
        assert_eq!(out, vec![0, 1, 0, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn periodic_hash() {
        let src = WordSource::periodic("ba", "abb").unwrap();
        let g = Grammar::new(&src, 1 << 62).unwrap();
        let mut out = Vec::new();
        g.write_range(0, 20, &mut out).unwrap();
        assert_eq!(g.hash_range(3, 11).unwrap(), Hashed::of_letters(&out[3..14]));
        assert_eq!(g.letter_at(1_000_000_000_001).unwrap(), {
            let r = (1_000_000_000_001u64 - 2) % 3;
            [0u8, 1, 1][r as usize]
        });
    }

    #[test]
    fn far_positions_are_consistent() {
        let g = Grammar::new(&WordSource::tribonacci(), 1 << 62).unwrap();
        let pos = 1u64 << 50;
        let mut out = Vec::new();
        g.write_range(pos, 64, &mut out).unwrap();
        assert_eq!(g.hash_range(pos, 64).unwrap(), Hashed::of_letters(&out));
        let h1 = g.hash_range(pos, 20).unwrap();
        let h2 = g.hash_range(pos + 20, 44).unwrap();
        assert_eq!(h1.concat(h2), g.hash_range(pos, 64).unwrap());
    }
}
