//! Morphisms of free monoids and their text format.

use serde::{Deserialize, Serialize};

use super::alphabet::{Alphabet, Letter, Word};
use crate::error::{Error, Result};

/// Letter-to-word map from `domain` to `codomain`.
///
/// Endomorphisms have equal domain and codomain. Empty images are accepted;
/// [`Morphism::erasing_letters`] reports them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    domain: Alphabet,
    codomain: Alphabet,
    images: Vec<Word>,
}

/// Outcome of the primitivity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Primitivity {
    pub primitive: bool,
    /// Smallest power whose matrix is entrywise positive.
    pub witness: Option<usize>,
}

impl Morphism {
    pub fn new(domain: Alphabet, codomain: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(Error::InvalidArgument(format!("{} images for {} letters", images.len(), domain.len())));
        }
        for img in &images {
            for &l in img {
                if l as usize >= codomain.len() {
                    return Err(Error::LetterOutOfRange { index: l as usize, size: codomain.len() });
                }
            }
        }
        Ok(Self { domain, codomain, images })
    }

    pub fn endomorphism(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        Self::new(alphabet.clone(), alphabet, images)
    }

    /// Builds an endomorphism from `(letter, image)` pairs written with visible symbols,
    /// the alphabet ordered as the pairs are.
    pub fn from_rules(rules: &[(char, &str)]) -> Result<Self> {
        let alphabet = Alphabet::new(rules.iter().map(|r| r.0).collect())?;
        let images = rules.iter().map(|(_, img)| alphabet.parse(img)).collect::<Result<Vec<_>>>()?;
        Self::endomorphism(alphabet, images)
    }

    pub fn fibonacci() -> Self {
        Self::from_rules(&[('a', "ab"), ('b', "a")]).expect("static rules")
    }

    pub fn thue_morse() -> Self {
        Self::from_rules(&[('a', "ab"), ('b', "ba")]).expect("static rules")
    }

    pub fn tribonacci() -> Self {
        Self::from_rules(&[('a', "ab"), ('b', "ac"), ('c', "a")]).expect("static rules")
    }

    pub fn domain(&self) -> &Alphabet {
        &self.domain
    }

    pub fn codomain(&self) -> &Alphabet {
        &self.codomain
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, l: Letter) -> Result<&Word> {
        self.images.get(l as usize).ok_or(Error::LetterOutOfRange { index: l as usize, size: self.domain.len() })
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn erasing_letters(&self) -> Vec<Letter> {
        (0..self.images.len()).filter(|&i| self.images[i].is_empty()).map(|i| i as Letter).collect()
    }

    pub fn apply(&self, w: &[Letter]) -> Result<Word> {
        let mut out = Vec::with_capacity(w.len() * 2);
        for &l in w {
            out.extend_from_slice(self.image(l)?);
        }
        Ok(out)
    }

    /// Applies the morphism to a word written with visible symbols.
    pub fn apply_str(&self, w: &str) -> Result<String> {
        let parsed = self.domain.parse(w)?;
        Ok(self.codomain.render(&self.apply(&parsed)?))
    }

    pub fn power(&self, w: &[Letter], k: usize) -> Result<Word> {
        let mut cur = w.to_vec();
        for _ in 0..k {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    /// `m[i][j]` counts letter `i` in the image of letter `j`.
    pub fn matrix(&self) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; self.domain.len()]; self.codomain.len()];
        for (j, img) in self.images.iter().enumerate() {
            for &i in img {
                m[i as usize][j] += 1;
            }
        }
        m
    }

    /// Checks powers of the boolean matrix up to `n²`.
    pub fn is_primitive(&self) -> Primitivity {
        let n = self.domain.len();
        if !self.is_endomorphism() || n == 0 {
            return Primitivity { primitive: false, witness: None };
        }
        let base: Vec<Vec<bool>> = self.matrix().iter().map(|row| row.iter().map(|&x| x > 0).collect()).collect();
        let mut cur = base.clone();
        for k in 1..=n * n {
            if cur.iter().all(|row| row.iter().all(|&x| x)) {
                return Primitivity { primitive: true, witness: Some(k) };
            }
            cur = bool_product(&cur, &base);
        }
        Primitivity { primitive: false, witness: None }
    }

    pub fn render_rules(&self) -> String {
        let mut s = String::new();
        for (j, img) in self.images.iter().enumerate() {
            s.push(self.domain.symbols()[j]);
            s.push_str(" -> ");
            s.push_str(&self.codomain.render(img));
            s.push('\n');
        }
        s
    }
}

fn bool_product(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![false; m]; n];
    for i in 0..n {
        for (k, &aik) in a[i].iter().enumerate() {
            if aik {
                for j in 0..m {
                    out[i][j] |= b[k][j];
                }
            }
        }
    }
    out
}

/// Contents of a morphism file: rules, optional seed and optional coding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismFile {
    pub morphism: Morphism,
    pub seed: Option<Letter>,
    pub coding: Option<Morphism>,
}

/// Parses the text format
///
/// ```text
/// # Fibonacci
/// a -> ab
/// b -> a
/// seed: a
/// coding: a->x, b->y
/// ```
pub fn parse_morphism_file(text: &str) -> Result<MorphismFile> {
    let mut rules: Vec<(usize, char, String)> = Vec::new();
    let mut seed: Option<(usize, char)> = None;
    let mut coding: Option<(usize, Vec<(char, String)>)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("seed:") {
            let rest = rest.trim();
            let mut chars = rest.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => seed = Some((line_no, c)),
                _ => return Err(parse_err(line_no, "seed must be a single letter")),
            }
        } else if let Some(rest) = line.strip_prefix("coding:") {
            let mut pairs = Vec::new();
            for part in rest.split(',') {
                let (l, img) = split_rule(part, line_no)?;
                pairs.push((l, img));
            }
            coding = Some((line_no, pairs));
        } else {
            let (l, img) = split_rule(line, line_no)?;
            if rules.iter().any(|r| r.1 == l) {
                return Err(parse_err(line_no, &format!("letter {l:?} defined twice")));
            }
            rules.push((line_no, l, img));
        }
    }
    if rules.is_empty() {
        return Err(parse_err(1, "no rules"));
    }
    let alphabet =
        Alphabet::new(rules.iter().map(|r| r.1).collect()).map_err(|e| parse_err(rules[0].0, &e.to_string()))?;
    let mut images = Vec::new();
    for (line_no, _, img) in &rules {
        images.push(alphabet.parse(img).map_err(|e| parse_err(*line_no, &e.to_string()))?);
    }
    let morphism = Morphism::endomorphism(alphabet.clone(), images)?;
    let seed = match seed {
        Some((line_no, c)) => {
            Some(alphabet.index_of(c).ok_or_else(|| parse_err(line_no, &format!("unknown seed {c:?}")))?)
        }
        None => None,
    };
    let coding = match coding {
        Some((line_no, pairs)) => {
            let mut target: Vec<char> = Vec::new();
            for (_, img) in &pairs {
                for c in img.chars() {
                    if !target.contains(&c) {
                        target.push(c);
                    }
                }
            }
            let codomain = Alphabet::new(target).map_err(|e| parse_err(line_no, &e.to_string()))?;
            let mut imgs = vec![None; alphabet.len()];
            for (l, img) in &pairs {
                let i = alphabet
                    .index_of(*l)
                    .ok_or_else(|| parse_err(line_no, &format!("coding of unknown letter {l:?}")))?;
                imgs[i as usize] = Some(codomain.parse(img).expect("codomain built from images"));
            }
            let imgs = imgs
                .into_iter()
                .enumerate()
                .map(|(i, x)| {
                    x.ok_or_else(|| parse_err(line_no, &format!("coding misses letter {:?}", alphabet.symbols()[i])))
                })
                .collect::<Result<Vec<_>>>()?;
            Some(Morphism::new(alphabet.clone(), codomain, imgs)?)
        }
        None => None,
    };
    Ok(MorphismFile { morphism, seed, coding })
}

fn split_rule(s: &str, line_no: usize) -> Result<(char, String)> {
    let (lhs, rhs) = s
        .split_once("->")
        .ok_or_else(|| parse_err(line_no, &format!("expected `letter -> image`, got {:?}", s.trim())))?;
    let lhs = lhs.trim();
    let mut chars = lhs.chars();
    let letter = match (chars.next(), chars.next()) {
        (Some(c), None) => c,
        _ => return Err(parse_err(line_no, &format!("left side {lhs:?} is not a single letter"))),
    };
    let rhs = rhs.trim();
    if rhs.chars().any(char::is_whitespace) {
        return Err(parse_err(line_no, "image contains whitespace"));
    }
    Ok((letter, rhs.to_string()))
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse { line, message: message.to_string() }
}
