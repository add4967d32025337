//! Alphabets, morphisms, infinite-word sources and the factor oracle.

pub mod alphabet;
pub mod factor;
pub(crate) mod grammar;
pub mod hash;
pub mod morphism;
pub mod oracle;
pub mod source;
pub mod spectral;

pub use alphabet::{Alphabet, Letter, Word};
pub use factor::{Factor, Rope};
pub use morphism::{parse_morphism_file, Morphism, MorphismFile, Primitivity};
pub use oracle::{
    factor_query, generate_prefix, letters_and_pairs, FactorAnswer, FactorOracle, FactorQuery, LetterClosure,
    OracleConfig,
};
pub use source::{parse_source, Convention, DigitStream, WordSource};
pub use spectral::perron_estimate;

/// `φ(w)`.
pub fn apply_morphism(phi: &Morphism, w: &[Letter]) -> crate::Result<Word> {
    phi.apply(w)
}
