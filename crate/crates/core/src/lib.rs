//! Coexistent combination of propositional logics through constructor
//! translations: formulas, translations, Gentzen calculi, proof search and
//! matrix semantics.

pub mod calculus;
pub mod error;
pub mod formula;
pub mod instances;
pub mod logicfile;
pub mod maps;
pub mod search;
pub mod semantics;
pub mod translation;

pub use error::{Error, ParseError, Result};
