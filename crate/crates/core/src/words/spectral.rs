use num_traits::Float;

use super::morphism::Morphism;
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 100_000;

/// Dominant eigenvalue of the substitution matrix of a primitive morphism.
///
/// Power iteration from the all-ones vector; every iterate brackets the
/// eigenvalue between the smallest and largest component ratio, and the
/// iteration stops once the bracket is narrower than `tol` or stops shrinking.
pub fn perron_estimate<T: Float>(phi: &Morphism, tol: T) -> Result<T> {
    if !phi.is_endomorphism() || !phi.is_primitive().primitive {
        return Err(Error::NotPrimitive);
    }
    let m: Vec<Vec<T>> =
        phi.matrix().iter().map(|row| row.iter().map(|&v| T::from(v).unwrap_or_else(T::infinity)).collect()).collect();
    let n = m.len();
    let mut x = vec![T::one(); n];
    let mut best = (T::zero(), T::infinity());
    let mut stalled = 0usize;
    for _ in 0..MAX_ITERATIONS {
        let y: Vec<T> = (0..n).map(|i| (0..n).fold(T::zero(), |acc, j| acc + m[i][j] * x[j])).collect();
        let mut lo = T::infinity();
        let mut hi = T::zero();
        for i in 0..n {
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let lo = lo.max(best.0);
        let hi = hi.min(best.1);
        if hi - lo <= tol {
            return Ok((lo + hi) / (T::one() + T::one()));
        }
        if lo <= best.0 && hi >= best.1 && best.1.is_finite() {
            stalled += 1;
            if stalled >= 64 {
                // floating point resolution reached
                return Ok((lo + hi) / (T::one() + T::one()));
            }
        } else {
            stalled = 0;
        }
        best = (lo, hi);
        let norm = y.iter().fold(T::zero(), |a, &b| a.max(b));
        x = y.into_iter().map(|v| v / norm).collect();
    }
    Ok((best.0 + best.1) / (T::one() + T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::alphabet::Alphabet;

    #[test]
    fn golden_ratio() {
        let l: f64 = perron_estimate(&Morphism::fibonacci(), 1e-12).unwrap();
        assert!((l - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn uniform_morphisms() {
        let l: f64 = perron_estimate(&Morphism::thue_morse(), 1e-12).unwrap();
        assert!((l - 2.0).abs() < 1e-12);
        let one = Morphism::endomorphism(Alphabet::from_chars("a").unwrap(), vec![vec![0, 0]]).unwrap();
        let l: f32 = perron_estimate(&one, 1e-6).unwrap();
        assert!((l - 2.0).abs() < 1e-6);
    }

    #[test]
    fn tribonacci_single_precision() {
        let l: f32 = perron_estimate(&Morphism::tribonacci(), 1e-5).unwrap();
        assert!((l - 1.839_286_8).abs() < 1e-4);
    }

    #[test]
    fn non_primitive_rejected() {
        let phi = Morphism::from_rules(&[('a', "ab"), ('b', "b")]).unwrap();
        assert_eq!(perron_estimate::<f64>(&phi, 1e-9), Err(Error::NotPrimitive));
    }
}
