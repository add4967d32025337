use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Letters are dense small integers; the alphabet maps them to visible characters.
pub type Letter = u8;

/// A finite word over dense letters.
pub type Word = Vec<Letter>;

/// Ordered finite set of visible symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: Vec<char>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidArgument("empty alphabet".into()));
        }
        if symbols.len() > 255 {
            return Err(Error::InvalidArgument("alphabet larger than 255 letters".into()));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::InvalidArgument(format!("duplicate symbol {c:?}")));
            }
            if c.is_whitespace() {
                return Err(Error::InvalidArgument("whitespace symbol".into()));
            }
        }
        Ok(Self { symbols })
    }

    /// `ab` gives the alphabet {a, b}.
    pub fn from_chars(s: &str) -> Result<Self> {
        Self::new(s.chars().collect())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn index_of(&self, c: char) -> Option<Letter> {
        self.symbols.iter().position(|&s| s == c).map(|i| i as Letter)
    }

    pub fn symbol(&self, l: Letter) -> Result<char> {
        self.symbols.get(l as usize).copied().ok_or(Error::LetterOutOfRange { index: l as usize, size: self.len() })
    }

    pub fn parse(&self, s: &str) -> Result<Word> {
        s.chars().map(|c| self.index_of(c).ok_or(Error::UnknownLetter(c))).collect()
    }

    /// Renders a word; letters outside the alphabet show as `?`.
    pub fn render(&self, w: &[Letter]) -> String {
        w.iter().map(|&l| self.symbols.get(l as usize).copied().unwrap_or('?')).collect()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.symbols.len() as Letter
    }
}
