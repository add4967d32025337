use serde::{Deserialize, Serialize};

/// An occurrence `W[pos .. pos + len]` of a factor in the infinite word.
///
/// Two occurrences of the same word at different positions are different
/// `Factor` values; compare contents through the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    pub pos: u64,
    pub len: u64,
}

impl Factor {
    pub fn new(pos: u64, len: u64) -> Self {
        Factor { pos, len }
    }

    pub fn end(&self) -> u64 {
        self.pos + self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Sub-occurrence `[offset, offset + len)` relative to this one.
    pub fn slice(&self, offset: u64, len: u64) -> Factor {
        debug_assert!(offset + len <= self.len);
        Factor { pos: self.pos + offset, len }
    }

    pub fn drop_front(&self, n: u64) -> Factor {
        self.slice(n, self.len - n)
    }

    pub fn drop_back(&self, n: u64) -> Factor {
        self.slice(0, self.len - n)
    }
}

/// A finite word written as a concatenation of factor occurrences.
///
/// Words built by gluing edge words need not be factors themselves, so they
/// are kept as ropes and compared by hash.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Rope {
    pieces: Vec<Factor>,
    len: u64,
}

impl Rope {
    pub fn new() -> Self {
        Rope::default()
    }

    pub fn from_factor(f: Factor) -> Self {
        let mut r = Rope::new();
        r.push(f);
        r
    }

    pub fn pieces(&self) -> &[Factor] {
        &self.pieces
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, f: Factor) {
        if f.len == 0 {
            return;
        }
        if let Some(last) = self.pieces.last_mut() {
            if last.end() == f.pos {
                last.len += f.len;
                self.len += f.len;
                return;
            }
        }
        self.len += f.len;
        self.pieces.push(f);
    }

    pub fn append(&mut self, other: &Rope) {
        for &f in &other.pieces {
            self.push(f);
        }
    }

    /// The sub-rope `[offset, offset + len)`.
    pub fn slice(&self, offset: u64, len: u64) -> Rope {
        assert!(offset + len <= self.len, "rope slice out of range");
        let mut out = Rope::new();
        let mut skip = offset;
        let mut need = len;
        for f in &self.pieces {
            if need == 0 {
                break;
            }
            if skip >= f.len {
                skip -= f.len;
                continue;
            }
            let take = (f.len - skip).min(need);
            out.push(f.slice(skip, take));
            need -= take;
            skip = 0;
        }
        out
    }

    pub fn drop_front(&self, n: u64) -> Rope {
        self.slice(n, self.len - n)
    }

    pub fn drop_back(&self, n: u64) -> Rope {
        self.slice(0, self.len - n)
    }

    /// Position in the infinite word of the letter at `offset`.
    pub fn position_of(&self, offset: u64) -> u64 {
        let mut skip = offset;
        for f in &self.pieces {
            if skip < f.len {
                return f.pos + skip;
            }
            skip -= f.len;
        }
        panic!("rope offset out of range")
    }
}

impl From<Factor> for Rope {
    fn from(f: Factor) -> Self {
        Rope::from_factor(f)
    }
}
