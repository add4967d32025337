//! Descriptions of infinite words and the small `key = value` config format.

use serde::{Deserialize, Serialize};

use super::alphabet::{Alphabet, Letter, Word};
use super::morphism::{parse_morphism_file, Morphism};
use crate::error::{Error, Result};

/// How continued-fraction digits drive the standard-word chain.
///
/// Both start from `s₋₁ = b`, `s₀ = a` and use `sₙ = sₙ₋₁^{dₙ} sₙ₋₂` for `n ≥ 2`.
/// `Direct` also uses it for `n = 1`; `Gauss` uses `s₁ = s₀^{d₁-1} s₋₁`, which
/// yields the characteristic word of slope `[0; d₁, d₂, ...]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    #[default]
    Direct,
    Gauss,
}

/// Infinite sequence of positive continued-fraction digits `d₁, d₂, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum DigitStream {
    /// `preperiod` followed by `period` repeated forever.
    Periodic { preperiod: Vec<u64>, period: Vec<u64> },
    /// Runs of ones of growing length separated by twos: 1,2,1,1,2,1,1,1,2,...
    GrowingRuns,
    /// Thue–Morse sequence over {1, 2}: 1,2,2,1,2,1,1,2,...
    ThueMorse,
    /// Decimal digits of 0.123456789101112... each shifted up by one.
    Champernowne,
}

impl DigitStream {
    pub fn constant(d: u64) -> Self {
        DigitStream::Periodic { preperiod: vec![], period: vec![d] }
    }

    /// The digit `dₙ`, `n ≥ 1`.
    pub fn digit(&self, n: usize) -> u64 {
        assert!(n >= 1, "digits are indexed from 1");
        match self {
            DigitStream::Periodic { preperiod, period } => {
                if n <= preperiod.len() {
                    preperiod[n - 1]
                } else {
                    period[(n - 1 - preperiod.len()) % period.len()]
                }
            }
            DigitStream::GrowingRuns => {
                let mut idx = n;
                let mut run = 1usize;
                loop {
                    if idx <= run {
                        return 1;
                    }
                    if idx == run + 1 {
                        return 2;
                    }
                    idx -= run + 1;
                    run += 1;
                }
            }
            DigitStream::ThueMorse => 1 + ((n - 1).count_ones() % 2) as u64,
            DigitStream::Champernowne => {
                let mut idx = n - 1;
                let mut width = 1usize;
                let mut count = 9usize;
                let mut first = 1usize;
                while idx >= width * count {
                    idx -= width * count;
                    width += 1;
                    count *= 10;
                    first *= 10;
                }
                let number = first + idx / width;
                let s = number.to_string();
                (s.as_bytes()[idx % width] - b'0') as u64 + 1
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let DigitStream::Periodic { preperiod, period } = self {
            if period.is_empty() {
                return Err(Error::InvalidSource("digit period is empty".into()));
            }
            if preperiod.iter().chain(period).any(|&d| d == 0) {
                return Err(Error::InvalidSource("continued-fraction digits must be positive".into()));
            }
        }
        Ok(())
    }
}

/// An infinite word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum WordSource {
    /// Fixed point `φ^∞(seed)`.
    PurelyMorphic { morphism: Morphism, seed: Letter },
    /// Coding of a fixed point, `ψ(φ^∞(seed))`.
    Morphic { morphism: Morphism, seed: Letter, coding: Morphism },
    /// Sturmian word generated by the standard-word chain.
    SturmianCF { digits: DigitStream, convention: Convention },
    /// `preperiod · period^ω`.
    EventuallyPeriodic { alphabet: Alphabet, preperiod: Word, period: Word },
}

/// Depth to which `φᵏ(u) ≠ ε` is checked.
pub const DEFAULT_CHECK_DEPTH: usize = 64;

impl WordSource {
    pub fn fibonacci() -> Self {
        WordSource::PurelyMorphic { morphism: Morphism::fibonacci(), seed: 0 }
    }

    pub fn thue_morse() -> Self {
        WordSource::PurelyMorphic { morphism: Morphism::thue_morse(), seed: 0 }
    }

    pub fn tribonacci() -> Self {
        WordSource::PurelyMorphic { morphism: Morphism::tribonacci(), seed: 0 }
    }

    pub fn sturmian(digits: DigitStream) -> Self {
        WordSource::SturmianCF { digits, convention: Convention::Direct }
    }

    pub fn periodic(preperiod: &str, period: &str) -> Result<Self> {
        let mut symbols: Vec<char> = Vec::new();
        for c in preperiod.chars().chain(period.chars()) {
            if !symbols.contains(&c) {
                symbols.push(c);
            }
        }
        symbols.sort_unstable();
        let alphabet = Alphabet::new(symbols)?;
        let pre = alphabet.parse(preperiod)?;
        let per = alphabet.parse(period)?;
        let src = WordSource::EventuallyPeriodic { alphabet, preperiod: pre, period: per };
        src.validate()?;
        Ok(src)
    }

    pub fn purely_morphic(morphism: Morphism, seed: Letter) -> Result<Self> {
        let src = WordSource::PurelyMorphic { morphism, seed };
        src.validate()?;
        Ok(src)
    }

    /// Alphabet of the generated word.
    pub fn alphabet(&self) -> Alphabet {
        match self {
            WordSource::PurelyMorphic { morphism, .. } => morphism.domain().clone(),
            WordSource::Morphic { coding, .. } => coding.codomain().clone(),
            WordSource::SturmianCF { .. } => Alphabet::from_chars("ab").expect("static"),
            WordSource::EventuallyPeriodic { alphabet, .. } => alphabet.clone(),
        }
    }

    /// Generating morphism, seed and coding when the word is (purely) morphic.
    pub fn morphic_parts(&self) -> Option<(&Morphism, Letter, Option<&Morphism>)> {
        match self {
            WordSource::PurelyMorphic { morphism, seed } => Some((morphism, *seed, None)),
            WordSource::Morphic { morphism, seed, coding } => Some((morphism, *seed, Some(coding))),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WordSource::PurelyMorphic { morphism, seed } => validate_fixed_point(morphism, *seed),
            WordSource::Morphic { morphism, seed, coding } => {
                validate_fixed_point(morphism, *seed)?;
                if coding.domain() != morphism.domain() {
                    return Err(Error::InvalidSource("coding domain differs from morphism alphabet".into()));
                }
                if !coding.erasing_letters().is_empty() {
                    return Err(Error::InvalidSource("coding erases letters".into()));
                }
                Ok(())
            }
            WordSource::SturmianCF { digits, .. } => digits.validate(),
            WordSource::EventuallyPeriodic { alphabet, preperiod, period } => {
                if period.is_empty() {
                    return Err(Error::InvalidSource("period is empty".into()));
                }
                if preperiod.iter().chain(period).any(|&l| l as usize >= alphabet.len()) {
                    return Err(Error::InvalidSource("letter outside alphabet".into()));
                }
                Ok(())
            }
        }
    }
}

fn validate_fixed_point(phi: &Morphism, seed: Letter) -> Result<()> {
    if !phi.is_endomorphism() {
        return Err(Error::InvalidSource("generating morphism must be an endomorphism".into()));
    }
    let img = phi.image(seed)?;
    if img.first() != Some(&seed) {
        return Err(Error::InvalidSource("image of the seed does not start with the seed".into()));
    }
    if img.len() < 2 {
        return Err(Error::InvalidSource("image of the seed is the seed alone".into()));
    }
    // |φᵏ⁺¹(a)| > |φᵏ(a)| for every k below the depth is exactly φᵏ(u) ≠ ε.
    let n = phi.domain().len();
    let mut lens = vec![1u64; n];
    let mut prev = 1u64;
    for depth in 0..DEFAULT_CHECK_DEPTH {
        let next: Vec<u64> =
            phi.images().iter().map(|w| w.iter().fold(0u64, |acc, &l| acc.saturating_add(lens[l as usize]))).collect();
        lens = next;
        let cur = lens[seed as usize];
        if cur <= prev && cur != u64::MAX {
            return Err(Error::InvalidSource(format!("φ^{depth}(u) is empty")));
        }
        prev = cur;
        if cur == u64::MAX {
            break;
        }
    }
    Ok(())
}

/// Parses either a morphism file (lines with `->`) or a `key = value` source config.
///
/// Config keys: `kind` (`morphic`, `sturmian`, `periodic`), and then
/// `morphism`, `seed`, `coding` (rules separated by `;` or `,`), or
/// `digits` (comma list, optional `|` before the repeating part, or one of
/// `growing-runs`, `thue-morse`, `champernowne`) with `convention`, or
/// `preperiod`, `period`.
pub fn parse_source(text: &str) -> Result<WordSource> {
    let is_config = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .any(|l| l.contains('=') && !l.contains("->"));
    if !is_config {
        let f = parse_morphism_file(text)?;
        let seed = f.seed.unwrap_or(0);
        let src = match f.coding {
            Some(coding) => WordSource::Morphic { morphism: f.morphism, seed, coding },
            None => WordSource::PurelyMorphic { morphism: f.morphism, seed },
        };
        src.validate()?;
        return Ok(src);
    }
    let mut kv: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or(Error::Parse { line: idx + 1, message: format!("expected `key = value`, got {line:?}") })?;
        kv.push((idx + 1, k.trim().to_string(), v.trim().to_string()));
    }
    let get = |key: &str| kv.iter().find(|e| e.1 == key).map(|e| (e.0, e.2.as_str()));
    let (kind_line, kind) = get("kind").ok_or(Error::Parse { line: 1, message: "missing `kind`".into() })?;
    let src = match kind {
        "morphic" | "purely-morphic" => {
            let (line, rules) =
                get("morphism").ok_or(Error::Parse { line: kind_line, message: "missing `morphism`".into() })?;
            let mut file = rules.replace([';', ','], "\n");
            if let Some((_, s)) = get("seed") {
                file.push_str(&format!("\nseed: {s}"));
            }
            if let Some((_, c)) = get("coding") {
                file.push_str(&format!("\ncoding: {}", c.replace(';', ",")));
            }
            let f = parse_morphism_file(&file).map_err(|e| Error::Parse { line, message: e.to_string() })?;
            let seed = f.seed.unwrap_or(0);
            match f.coding {
                Some(coding) => WordSource::Morphic { morphism: f.morphism, seed, coding },
                None => WordSource::PurelyMorphic { morphism: f.morphism, seed },
            }
        }
        "sturmian" => {
            let (line, d) =
                get("digits").ok_or(Error::Parse { line: kind_line, message: "missing `digits`".into() })?;
            let digits = parse_digits(d).map_err(|m| Error::Parse { line, message: m })?;
            let convention = match get("convention") {
                None | Some((_, "direct")) => Convention::Direct,
                Some((_, "gauss")) => Convention::Gauss,
                Some((line, other)) => {
                    return Err(Error::Parse { line, message: format!("unknown convention {other:?}") })
                }
            };
            WordSource::SturmianCF { digits, convention }
        }
        "periodic" => {
            let pre = get("preperiod").map(|e| e.1).unwrap_or("");
            let (_, per) = get("period").ok_or(Error::Parse { line: kind_line, message: "missing `period`".into() })?;
            WordSource::periodic(pre, per)?
        }
        other => return Err(Error::Parse { line: kind_line, message: format!("unknown kind {other:?}") }),
    };
    src.validate()?;
    Ok(src)
}

fn parse_digits(s: &str) -> std::result::Result<DigitStream, String> {
    match s {
        "growing-runs" => return Ok(DigitStream::GrowingRuns),
        "thue-morse" => return Ok(DigitStream::ThueMorse),
        "champernowne" => return Ok(DigitStream::Champernowne),
        _ => {}
    }
    let list = |part: &str| -> std::result::Result<Vec<u64>, String> {
        part.split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<u64>().map_err(|_| format!("bad digit {x:?}")))
            .collect()
    };
    let (pre, per) = match s.split_once('|') {
        Some((a, b)) => (list(a)?, list(b)?),
        None => (vec![], list(s)?),
    };
    let stream = DigitStream::Periodic { preperiod: pre, period: per };
    stream.validate().map_err(|e| e.to_string())?;
    Ok(stream)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_streams() {
        let g: Vec<u64> = (1..=9).map(|n| DigitStream::GrowingRuns.digit(n)).collect();
        assert_eq!(g, vec![1, 2, 1, 1, 2, 1, 1, 1, 2]);
        let t: Vec<u64> = (1..=8).map(|n| DigitStream::ThueMorse.digit(n)).collect();
        assert_eq!(t, vec![1, 2, 2, 1, 2, 1, 1, 2]);
        let c: Vec<u64> = (1..=13).map(|n| DigitStream::Champernowne.digit(n)).collect();
        assert_eq!(c, vec![2, 3, 4, 5, 6, 7, 8, 9, 10, 2, 1, 2, 2]);
        let p = DigitStream::Periodic { preperiod: vec![3], period: vec![1, 2] };
        assert_eq!((1..=5).map(|n| p.digit(n)).collect::<Vec<_>>(), vec![3, 1, 2, 1, 2]);
    }

    #[test]
    fn validation_rejects_bad_fixed_points() {
        let bad_seed = Morphism::from_rules(&[('a', "ba"), ('b', "a")]).unwrap();
        assert!(WordSource::purely_morphic(bad_seed, 0).is_err());
        let stuck = Morphism::from_rules(&[('a', "a"), ('b', "ab")]).unwrap();
        assert!(WordSource::purely_morphic(stuck, 0).is_err());
        let empties = Morphism::from_rules(&[('a', "ab"), ('b', "")]).unwrap();
        assert!(matches!(WordSource::purely_morphic(empties, 0), Err(Error::InvalidSource(_))));
        assert!(WordSource::fibonacci().validate().is_ok());
    }

    #[test]
    fn zero_digits_rejected() {
        let s = WordSource::sturmian(DigitStream::Periodic { preperiod: vec![0], period: vec![1] });
        assert!(s.validate().is_err());
    }

    #[test]
    fn parses_configs() {
        let s = parse_source("kind = periodic\nperiod = ab\n").unwrap();
        assert_eq!(s, WordSource::periodic("", "ab").unwrap());
        let s = parse_source("kind = morphic\nmorphism = a->ab; b->a\nseed = a\n").unwrap();
        assert_eq!(s, WordSource::fibonacci());
        let s = parse_source("kind = sturmian\ndigits = 2 | 1, 2\nconvention = gauss\n").unwrap();
        assert_eq!(
            s,
            WordSource::SturmianCF {
                digits: DigitStream::Periodic { preperiod: vec![2], period: vec![1, 2] },
                convention: Convention::Gauss
            }
        );
        let s = parse_source("a -> ab\nb -> a\n").unwrap();
        assert_eq!(s, WordSource::fibonacci());
    }

    #[test]
    fn config_errors_have_lines() {
        let e = parse_source("kind = sturmian\ndigits = 1, x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_source("kind = nope\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }
}
