//! The factor oracle: a growing materialized prefix plus random access through
//! the source grammar, with certificates bounding where factors must appear.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use memchr::memmem;
use serde::{Deserialize, Serialize};

use super::alphabet::{Alphabet, Letter, Word};
use super::factor::{Factor, Rope};
use super::grammar::Grammar;
use super::hash::Hashed;
use super::morphism::Morphism;
use super::source::WordSource;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Longest prefix the oracle will materialize.
    pub buffer_cap: usize,
    /// Largest position reachable through the grammar.
    pub position_cap: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { buffer_cap: 1 << 24, position_cap: 1 << 62 }
    }
}

#[derive(Debug, Clone)]
enum Certs {
    Morphic { letters: Vec<Letter>, t2: Option<usize>, t3: Option<usize> },
    Sturmian,
    Periodic { pre: u64, per: u64 },
}

/// Query modes of [`factor_query`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorQuery {
    Membership,
    CountInWindow { start: usize, len: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorAnswer {
    Member(bool),
    Count(usize),
}

#[derive(Debug, Clone)]
pub struct FactorOracle {
    source: WordSource,
    alphabet: Alphabet,
    config: OracleConfig,
    grammar: Grammar,
    certs: Certs,
    buffer: Vec<Letter>,
    raw: Vec<Letter>,
    raw_ptr: usize,
    coded_ptr: usize,
    factor_cache: BTreeMap<usize, Arc<Vec<Word>>>,
}

impl FactorOracle {
    pub fn new(source: WordSource) -> Result<Self> {
        Self::with_config(source, OracleConfig::default())
    }

    pub fn with_config(source: WordSource, config: OracleConfig) -> Result<Self> {
        let grammar = Grammar::new(&source, config.position_cap)?;
        let certs = match &source {
            WordSource::PurelyMorphic { morphism, seed } | WordSource::Morphic { morphism, seed, .. } => {
                morphic_certs(morphism, *seed)
            }
            WordSource::SturmianCF { .. } => Certs::Sturmian,
            WordSource::EventuallyPeriodic { preperiod, period, .. } => {
                Certs::Periodic { pre: preperiod.len() as u64, per: period.len() as u64 }
            }
        };
        Ok(FactorOracle {
            alphabet: source.alphabet(),
            source,
            config,
            grammar,
            certs,
            buffer: Vec::new(),
            raw: Vec::new(),
            raw_ptr: 0,
            coded_ptr: 0,
            factor_cache: BTreeMap::new(),
        })
    }

    pub fn source(&self) -> &WordSource {
        &self.source
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn config(&self) -> OracleConfig {
        self.config
    }

    /// The materialized prefix.
    pub fn buffer(&self) -> &[Letter] {
        &self.buffer
    }

    pub fn ensure_prefix(&mut self, n: usize) -> Result<()> {
        if n <= self.buffer.len() {
            return Ok(());
        }
        if n > self.config.buffer_cap {
            return Err(Error::HorizonExceeded { needed: n as u64, cap: self.config.buffer_cap as u64 });
        }
        match &self.source {
            WordSource::PurelyMorphic { morphism, seed } => {
                let (m, s) = (morphism.clone(), *seed);
                self.grow_morphic(&m, s, None, n)?;
            }
            WordSource::Morphic { morphism, seed, coding } => {
                let (m, s, c) = (morphism.clone(), *seed, coding.clone());
                self.grow_morphic(&m, s, Some(&c), n)?;
            }
            _ => {
                let from = self.buffer.len() as u64;
                let mut out = std::mem::take(&mut self.buffer);
                self.grammar.write_range(from, n as u64 - from, &mut out)?;
                self.buffer = out;
            }
        }
        Ok(())
    }

    fn grow_morphic(&mut self, phi: &Morphism, seed: Letter, coding: Option<&Morphism>, n: usize) -> Result<()> {
        if self.raw.is_empty() {
            self.raw = phi.image(seed)?.clone();
            self.raw_ptr = 1;
        }
        while self.buffer.len() < n {
            while self.coded_ptr >= self.raw.len() {
                if self.raw_ptr >= self.raw.len() {
                    return Err(Error::InvalidSource("fixed point stops growing".into()));
                }
                let l = self.raw[self.raw_ptr];
                self.raw.extend_from_slice(phi.image(l)?);
                self.raw_ptr += 1;
            }
            let l = self.raw[self.coded_ptr];
            match coding {
                Some(c) => self.buffer.extend_from_slice(c.image(l)?),
                None => self.buffer.push(l),
            }
            self.coded_ptr += 1;
        }
        Ok(())
    }

    /// First `n` letters of the uncoded fixed point behind a morphic source.
    pub fn underlying_prefix(&mut self, n: usize) -> Result<Option<Word>> {
        let (phi, seed) = match &self.source {
            WordSource::PurelyMorphic { .. } => return self.prefix(n).map(Some),
            WordSource::Morphic { morphism, seed, .. } => (morphism.clone(), *seed),
            _ => return Ok(None),
        };
        if n > self.config.buffer_cap {
            return Err(Error::HorizonExceeded { needed: n as u64, cap: self.config.buffer_cap as u64 });
        }
        if self.raw.is_empty() {
            self.raw = phi.image(seed)?.clone();
            self.raw_ptr = 1;
        }
        while self.raw.len() < n {
            if self.raw_ptr >= self.raw.len() {
                return Err(Error::InvalidSource("fixed point stops growing".into()));
            }
            let l = self.raw[self.raw_ptr];
            self.raw.extend_from_slice(phi.image(l)?);
            self.raw_ptr += 1;
        }
        Ok(Some(self.raw[..n].to_vec()))
    }

    /// First `n` letters.
    pub fn prefix(&mut self, n: usize) -> Result<Word> {
        self.ensure_prefix(n)?;
        Ok(self.buffer[..n].to_vec())
    }

    /// Length of a prefix that contains every factor of length `n`.
    ///
    /// `Ok(None)` means the source admits no such certificate.
    pub fn prefix_certificate(&self, n: usize) -> Result<Option<u64>> {
        if n == 0 {
            return Ok(Some(0));
        }
        let n = n as u64;
        match &self.certs {
            Certs::Morphic { letters, t2, .. } => {
                let Some(t2) = *t2 else { return Ok(None) };
                let Some(j) = self.morphic_level(letters, n)? else { return Ok(None) };
                let seed = self.morphic_seed();
                self.grammar
                    .morphic_len(j + t2, seed)
                    .map(Some)
                    .ok_or(Error::HorizonExceeded { needed: u64::MAX, cap: self.config.position_cap })
            }
            Certs::Sturmian => {
                let k = self.sturmian_level(n)?;
                self.sturmian_len(k + 3).map(Some)
            }
            Certs::Periodic { pre, per } => Ok(Some(pre + per * (n.div_ceil(*per) + 1))),
        }
    }

    /// Length such that every window of that length contains every factor of length `n`.
    pub fn window_certificate(&self, n: usize) -> Result<Option<u64>> {
        if n == 0 {
            return Ok(Some(0));
        }
        let n = n as u64;
        let horizon = Error::HorizonExceeded { needed: u64::MAX, cap: self.config.position_cap };
        match &self.certs {
            Certs::Morphic { letters, t3, .. } => {
                let Some(t3) = *t3 else { return Ok(None) };
                let Some(j) = self.morphic_level(letters, n)? else { return Ok(None) };
                let mut best = 0u64;
                for &c in letters {
                    best = best.max(self.grammar.morphic_len(j + t3, c).ok_or(horizon.clone())?);
                }
                best.checked_mul(2).map(Some).ok_or(horizon)
            }
            Certs::Sturmian => {
                let k = self.sturmian_level(n)?;
                let l = self.sturmian_len(k + 4)?;
                l.checked_mul(2).map(Some).ok_or(horizon)
            }
            Certs::Periodic { pre, per } => {
                if *pre == 0 {
                    Ok(Some(per * (n.div_ceil(*per) + 1)))
                } else {
                    Ok(None)
                }
            }
        }
    }

    /// True when prefix certificates exist for every length.
    pub fn is_certified(&self) -> bool {
        matches!(self.prefix_certificate(1), Ok(Some(_)))
    }

    fn morphic_seed(&self) -> Letter {
        self.source.morphic_parts().map(|p| p.1).unwrap_or(0)
    }

    /// Smallest level whose blocks over the letters of the word all have length at least `n`.
    fn morphic_level(&self, letters: &[Letter], n: u64) -> Result<Option<usize>> {
        let mut j = 0usize;
        loop {
            let mut min = u64::MAX;
            for &c in letters {
                match self.grammar.morphic_len(j, c) {
                    Some(l) => min = min.min(l),
                    None => {
                        // levels stop at the position cap or at the level limit
                        let seed_len = self.grammar.extent();
                        if seed_len >= self.config.position_cap {
                            return Err(Error::HorizonExceeded { needed: u64::MAX, cap: self.config.position_cap });
                        }
                        return Ok(None);
                    }
                }
            }
            if min >= n {
                return Ok(Some(j));
            }
            j += 1;
        }
    }

    fn sturmian_level(&self, n: u64) -> Result<i64> {
        let mut k = 1i64;
        loop {
            let l = self.sturmian_len(k - 1)?;
            if l >= n {
                return Ok(k);
            }
            k += 1;
        }
    }

    fn sturmian_len(&self, k: i64) -> Result<u64> {
        self.grammar.sturmian_len(k).ok_or(Error::HorizonExceeded { needed: u64::MAX, cap: self.config.position_cap })
    }

    fn certified_prefix_len(&self, n: usize) -> Result<Option<usize>> {
        match self.prefix_certificate(n)? {
            Some(pc) => {
                if pc > self.config.buffer_cap as u64 {
                    Err(Error::HorizonExceeded { needed: pc, cap: self.config.buffer_cap as u64 })
                } else {
                    Ok(Some(pc as usize))
                }
            }
            None => Ok(None),
        }
    }

    /// Whether membership of words of length `n` can be decided inside the buffer cap.
    pub fn searchable(&self, n: usize) -> Result<bool> {
        Ok(matches!(self.prefix_certificate(n)?, Some(pc) if pc <= self.config.buffer_cap as u64))
    }

    /// Position of the first occurrence of `u`, or `None` when `u` is certainly not a factor.
    ///
    /// Without a certificate a miss within the buffer cap is `HorizonExceeded`.
    pub fn find(&mut self, u: &[Letter]) -> Result<Option<u64>> {
        if u.is_empty() {
            return Ok(Some(0));
        }
        if u.iter().any(|&l| l as usize >= self.alphabet.len()) {
            return Ok(None);
        }
        match self.certified_prefix_len(u.len())? {
            Some(pc) => {
                self.ensure_prefix(pc)?;
                Ok(memmem::find(&self.buffer[..pc], u).map(|p| p as u64))
            }
            None => {
                let cap = self.config.buffer_cap;
                let mut n = self.buffer.len().max(4096).min(cap);
                loop {
                    self.ensure_prefix(n)?;
                    if let Some(p) = memmem::find(&self.buffer[..n], u) {
                        return Ok(Some(p as u64));
                    }
                    if n >= cap {
                        return Err(Error::HorizonExceeded { needed: cap as u64 + 1, cap: cap as u64 });
                    }
                    n = (n * 2).min(cap);
                }
            }
        }
    }

    pub fn contains(&mut self, u: &[Letter]) -> Result<bool> {
        Ok(self.find(u)?.is_some())
    }

    /// Overlapping occurrences of `u` inside `W[start .. start + len]`.
    pub fn count_in_window(&mut self, u: &[Letter], start: usize, len: usize) -> Result<usize> {
        let end = start
            .checked_add(len)
            .ok_or(Error::HorizonExceeded { needed: u64::MAX, cap: self.config.buffer_cap as u64 })?;
        self.ensure_prefix(end)?;
        Ok(count_overlapping(&self.buffer[start..end], u))
    }

    /// Every factor of length `n`, sorted; requires a prefix certificate.
    pub fn factor_set(&mut self, n: usize) -> Result<Arc<Vec<Word>>> {
        if let Some(set) = self.factor_cache.get(&n) {
            return Ok(set.clone());
        }
        let pc = self
            .certified_prefix_len(n)?
            .ok_or(Error::HorizonExceeded { needed: u64::MAX, cap: self.config.buffer_cap as u64 })?;
        self.ensure_prefix(pc)?;
        let set = Arc::new(distinct_windows(&self.buffer[..pc], n));
        self.factor_cache.insert(n, set.clone());
        Ok(set)
    }

    pub fn letter_at(&self, p: u64) -> Result<Letter> {
        if (p as usize) < self.buffer.len() && p < usize::MAX as u64 {
            return Ok(self.buffer[p as usize]);
        }
        self.grammar.letter_at(p)
    }

    pub fn hash(&self, f: Factor) -> Result<Hashed> {
        let end = f
            .pos
            .checked_add(f.len)
            .ok_or(Error::HorizonExceeded { needed: u64::MAX, cap: self.config.position_cap })?;
        let in_buffer = end <= self.buffer.len() as u64;
        if in_buffer && (f.len <= 4096 || end > self.grammar.extent()) {
            return Ok(Hashed::of_letters(&self.buffer[f.pos as usize..end as usize]));
        }
        self.grammar.hash_range(f.pos, f.len)
    }

    pub fn hash_rope(&self, r: &Rope) -> Result<Hashed> {
        let mut acc = Hashed::EMPTY;
        for &f in r.pieces() {
            acc = acc.concat(self.hash(f)?);
        }
        Ok(acc)
    }

    pub fn materialize(&self, f: Factor) -> Result<Word> {
        let end = f
            .pos
            .checked_add(f.len)
            .ok_or(Error::HorizonExceeded { needed: u64::MAX, cap: self.config.position_cap })?;
        if end <= self.buffer.len() as u64 {
            return Ok(self.buffer[f.pos as usize..end as usize].to_vec());
        }
        if f.len > self.config.buffer_cap as u64 {
            return Err(Error::HorizonExceeded { needed: f.len, cap: self.config.buffer_cap as u64 });
        }
        let mut out = Vec::with_capacity(f.len as usize);
        self.grammar.write_range(f.pos, f.len, &mut out)?;
        Ok(out)
    }

    /// Letters of a rope, refusing ropes longer than `budget`.
    pub fn materialize_rope(&self, r: &Rope, budget: u64) -> Result<Word> {
        if r.len() > budget {
            return Err(Error::HorizonExceeded { needed: r.len(), cap: budget });
        }
        let mut out = Vec::with_capacity(r.len() as usize);
        for &f in r.pieces() {
            out.extend(self.materialize(f)?);
        }
        Ok(out)
    }

    pub fn rope_letter(&self, r: &Rope, offset: u64) -> Result<Letter> {
        self.letter_at(r.position_of(offset))
    }

    pub fn render(&self, w: &[Letter]) -> String {
        self.alphabet.render(w)
    }

    pub fn parse(&self, s: &str) -> Result<Word> {
        self.alphabet.parse(s)
    }
}

type Closure = (BTreeSet<Letter>, BTreeSet<(Letter, Letter)>);

/// Letters and 2-factors of `φ(w)` from those of `w`, for non-erasing `φ`.
fn closure_step(phi: &Morphism, s: &Closure) -> Closure {
    let mut letters = BTreeSet::new();
    let mut pairs = BTreeSet::new();
    for &c in &s.0 {
        let img = &phi.images()[c as usize];
        letters.extend(img.iter().copied());
        for w in img.windows(2) {
            pairs.insert((w[0], w[1]));
        }
    }
    for &(x, y) in &s.1 {
        let (ix, iy) = (&phi.images()[x as usize], &phi.images()[y as usize]);
        if let (Some(&l), Some(&f)) = (ix.last(), iy.first()) {
            pairs.insert((l, f));
        }
    }
    (letters, pairs)
}

fn closure_limit(phi: &Morphism) -> usize {
    4 * (phi.domain().len() + 1).pow(2) + 64
}

/// Letters, 2-factors, and the first level `t` at which `φᵗ(seed)` already shows all of them.
pub type LetterClosure = (Vec<Letter>, Vec<(Letter, Letter)>, usize);

/// Letters and 2-factors of `φ^∞(seed)`; `None` for erasing morphisms.
pub fn letters_and_pairs(phi: &Morphism, seed: Letter) -> Option<LetterClosure> {
    if !phi.erasing_letters().is_empty() {
        return None;
    }
    let mut state: Closure = (BTreeSet::from([seed]), BTreeSet::new());
    for t in 0..closure_limit(phi) {
        let next = closure_step(phi, &state);
        if next == state {
            return Some((state.0.into_iter().collect(), state.1.into_iter().collect(), t));
        }
        state = next;
    }
    None
}

/// Morphic certificate levels: `t2` where the (letters, 2-factors) pair of
/// `φᵗ(seed)` stabilizes, `t3` where every `φᵗ(c)` contains all 2-factors.
fn morphic_certs(phi: &Morphism, seed: Letter) -> Certs {
    let Some((letters, pairs, t2)) = letters_and_pairs(phi, seed) else {
        let letters = phi.domain().letters().collect();
        return Certs::Morphic { letters, t2: None, t3: None };
    };
    let target: BTreeSet<(Letter, Letter)> = pairs.into_iter().collect();
    let mut per_letter: Vec<Closure> = letters.iter().map(|&c| (BTreeSet::from([c]), BTreeSet::new())).collect();
    let mut t3 = None;
    for t in 0..closure_limit(phi) {
        if per_letter.iter().all(|s| target.is_subset(&s.1)) {
            t3 = Some(t);
            break;
        }
        per_letter = per_letter.iter().map(|s| closure_step(phi, s)).collect();
    }
    Certs::Morphic { letters, t2: Some(t2), t3 }
}

pub(crate) fn count_overlapping(hay: &[Letter], u: &[Letter]) -> usize {
    if u.is_empty() {
        return hay.len() + 1;
    }
    let finder = memmem::Finder::new(u);
    let mut count = 0;
    let mut from = 0;
    while from + u.len() <= hay.len() {
        match finder.find(&hay[from..]) {
            Some(p) => {
                count += 1;
                from += p + 1;
            }
            None => break,
        }
    }
    count
}

pub(crate) fn distinct_windows(text: &[Letter], n: usize) -> Vec<Word> {
    if n > text.len() {
        return Vec::new();
    }
    let set: HashSet<&[Letter]> = text.windows(n.max(1)).collect();
    let mut out: Vec<Word> = if n == 0 { vec![Vec::new()] } else { set.into_iter().map(|w| w.to_vec()).collect() };
    out.sort();
    out
}

/// Membership or windowed occurrence count of `u`.
pub fn factor_query(oracle: &mut FactorOracle, u: &[Letter], mode: FactorQuery) -> Result<FactorAnswer> {
    match mode {
        FactorQuery::Membership => oracle.contains(u).map(FactorAnswer::Member),
        FactorQuery::CountInWindow { start, len } => oracle.count_in_window(u, start, len).map(FactorAnswer::Count),
    }
}

/// First `n` letters of the oracle's word.
pub fn generate_prefix(oracle: &mut FactorOracle, n: usize) -> Result<Word> {
    oracle.prefix(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::source::DigitStream;

    fn render_prefix(src: WordSource, n: usize) -> String {
        let mut o = FactorOracle::new(src).unwrap();
        let p = o.prefix(n).unwrap();
        o.render(&p)
    }

    #[test]
    fn prefixes() {
        assert_eq!(render_prefix(WordSource::fibonacci(), 8), "abaababa");
        assert_eq!(render_prefix(WordSource::thue_morse(), 8), "abbabaab");
        assert_eq!(render_prefix(WordSource::periodic("", "ab").unwrap(), 5), "ababa");
    }

    #[test]
    fn prefix_is_monotone() {
        let mut o = FactorOracle::new(WordSource::tribonacci()).unwrap();
        let long = o.prefix(500).unwrap();
        let short = o.prefix(100).unwrap();
        assert_eq!(&long[..100], &short[..]);
    }

    #[test]
    fn horizon_cap_enforced() {
        let cfg = OracleConfig { buffer_cap: 100, position_cap: 1 << 62 };
        let mut o = FactorOracle::with_config(WordSource::fibonacci(), cfg).unwrap();
        assert!(matches!(o.prefix(101), Err(Error::HorizonExceeded { needed: 101, cap: 100 })));
    }

    #[test]
    fn membership_examples() {
        let mut o = FactorOracle::new(WordSource::fibonacci()).unwrap();
        assert!(o.contains(&o.parse("aa").unwrap()).unwrap());
        assert!(!o.contains(&o.parse("bb").unwrap()).unwrap());
        assert!(o.contains(&[]).unwrap());
    }

    #[test]
    fn uncertified_negative_is_horizon() {
        let phi = Morphism::from_rules(&[('a', "ab"), ('b', "b")]).unwrap();
        let cfg = OracleConfig { buffer_cap: 1 << 12, position_cap: 1 << 62 };
        let mut o = FactorOracle::with_config(WordSource::purely_morphic(phi, 0).unwrap(), cfg).unwrap();
        assert!(o.contains(&[1, 1, 1]).unwrap());
        assert!(o.prefix_certificate(3).unwrap().is_none());
        assert!(matches!(o.contains(&[0, 0]), Err(Error::HorizonExceeded { .. })));
    }

    #[test]
    fn certificates_cover_all_factors() {
        for src in [
            WordSource::fibonacci(),
            WordSource::thue_morse(),
            WordSource::tribonacci(),
            WordSource::sturmian(DigitStream::Periodic { preperiod: vec![], period: vec![1, 3] }),
        ] {
            let mut o = FactorOracle::new(src).unwrap();
            for n in [1usize, 2, 5, 13, 30] {
                let pc = o.prefix_certificate(n).unwrap().unwrap() as usize;
                let wc = o.window_certificate(n).unwrap().unwrap() as usize;
                let big = 8 * wc.max(pc);
                o.ensure_prefix(big).unwrap();
                let all = distinct_windows(&o.buffer()[..big], n);
                assert_eq!(distinct_windows(&o.buffer()[..pc], n), all, "prefix certificate n={n}");
                for start in [1usize, 17, 3 * wc / 2] {
                    assert_eq!(distinct_windows(&o.buffer()[start..start + wc], n), all, "window n={n}");
                }
            }
        }
    }

    #[test]
    fn count_in_window_counts_overlaps() {
        let mut o = FactorOracle::new(WordSource::periodic("", "a").unwrap()).unwrap();
        assert_eq!(o.count_in_window(&[0, 0], 0, 5).unwrap(), 4);
        let mut f = FactorOracle::new(WordSource::fibonacci()).unwrap();
        // abaababa: aba at 0, 3, 5
        assert_eq!(f.count_in_window(&f.parse("aba").unwrap(), 0, 8).unwrap(), 3);
    }

    #[test]
    fn hash_and_materialize_far_factors() {
        let o = FactorOracle::new(WordSource::fibonacci()).unwrap();
        let f = Factor::new(1 << 40, 50);
        let w = o.materialize(f).unwrap();
        assert_eq!(o.hash(f).unwrap(), Hashed::of_letters(&w));
        let mut r = Rope::from_factor(f);
        r.push(Factor::new(0, 3));
        let rw = o.materialize_rope(&r, 100).unwrap();
        assert_eq!(o.hash_rope(&r).unwrap(), Hashed::of_letters(&rw));
        assert!(o.materialize_rope(&r, 10).is_err());
    }

    #[test]
    fn factor_sets_are_sorted_and_cached() {
        let mut o = FactorOracle::new(WordSource::fibonacci()).unwrap();
        let s = o.factor_set(3).unwrap();
        let rendered: Vec<String> = s.iter().map(|w| o.render(w)).collect();
        assert_eq!(rendered, vec!["aab", "aba", "baa", "bab"]);
        assert!(Arc::ptr_eq(&s, &o.factor_set(3).unwrap()));
    }
}
