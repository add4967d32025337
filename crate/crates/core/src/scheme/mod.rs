//! Graphs with words, their front and back words, construction from Rauzy
//! graphs and the bounded scheme validator.

pub mod admissible;
pub mod build;
pub mod export;
pub mod model;
pub mod paths;
pub mod trace;
pub mod validate;

pub use admissible::admissible;
pub use build::{build_scheme_from_rauzy, find_clean_order};
pub use export::scheme_to_dot;
pub use model::{Role, Scheme, SchemeEdge, SchemeRepr, SchemeVertex};
pub use paths::{
    back, front, glue, is_symmetric, natural_extension, path_word, path_words, symmetric_closure, symmetric_paths,
    SchemePath,
};
pub use trace::{trace, Trace, Visit};
pub use validate::{validate_scheme, PropertyResult, ValidationBounds, ValidationReport, Verdict};

#[cfg(test)]
mod tests;
