//! Polynomial hashing modulo the Mersenne prime 2^61 - 1.
//!
//! A word `w` hashes to `sum w[i] * B^(|w|-1-i)` with letters shifted by one, so
//! concatenation is `h(uv) = h(u) * B^|v| + h(v)`.

pub const MODULUS: u64 = (1u64 << 61) - 1;
pub const BASE: u64 = 0x0f3d_5b79_a3c1_2e71 % MODULUS;

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    let p = (a as u128) * (b as u128);
    let lo = (p as u64) & MODULUS;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

pub fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    r
}

/// Hash of a word together with its length; combining is associative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hashed {
    pub hash: u64,
    pub len: u64,
    /// `BASE^len`.
    pub shift: u64,
}

impl Hashed {
    pub const EMPTY: Hashed = Hashed { hash: 0, len: 0, shift: 1 };

    pub fn of_letters(w: &[u8]) -> Self {
        let mut h = 0u64;
        for &l in w {
            h = add(mul(h, BASE), l as u64 + 1);
        }
        Hashed { hash: h, len: w.len() as u64, shift: pow(BASE, w.len() as u64) }
    }

    pub fn concat(self, other: Hashed) -> Hashed {
        Hashed {
            hash: add(mul(self.hash, other.shift), other.hash),
            len: self.len.saturating_add(other.len),
            shift: mul(self.shift, other.shift),
        }
    }

    /// `self` repeated `q` times.
    pub fn repeat(self, q: u64) -> Hashed {
        let mut acc = Hashed::EMPTY;
        let mut sq = self;
        let mut q = q;
        while q > 0 {
            if q & 1 == 1 {
                acc = acc.concat(sq);
            }
            sq = sq.concat(sq);
            q >>= 1;
        }
        acc
    }

    /// Hash of `w[a..b]` given `self = h(w[..b])` and `prefix = h(w[..a])`.
    pub fn strip_prefix(self, prefix: Hashed) -> Hashed {
        let len = self.len - prefix.len;
        let shift = pow(BASE, len);
        Hashed { hash: sub(self.hash, mul(prefix.hash, shift)), len, shift }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concat_matches_direct() {
        let u = [0u8, 1, 1, 0, 2];
        let v = [1u8, 0, 0];
        let mut uv = u.to_vec();
        uv.extend_from_slice(&v);
        assert_eq!(Hashed::of_letters(&u).concat(Hashed::of_letters(&v)), Hashed::of_letters(&uv));
    }

    #[test]
    fn repeat_matches_direct() {
        let u = [0u8, 1, 1];
        let mut w = Vec::new();
        for _ in 0..13 {
            w.extend_from_slice(&u);
        }
        assert_eq!(Hashed::of_letters(&u).repeat(13), Hashed::of_letters(&w));
        assert_eq!(Hashed::of_letters(&u).repeat(0), Hashed::EMPTY);
    }

    #[test]
    fn strip_prefix_gives_suffix_hash() {
        let w = [0u8, 1, 0, 0, 1, 0, 1];
        let whole = Hashed::of_letters(&w);
        let pre = Hashed::of_letters(&w[..3]);
        assert_eq!(whole.strip_prefix(pre), Hashed::of_letters(&w[3..]));
    }

    #[test]
    fn mul_reduces() {
        assert_eq!(mul(MODULUS - 1, MODULUS - 1), 1);
        assert_eq!(pow(BASE, 0), 1);
    }
}
