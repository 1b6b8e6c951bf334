//! The `.cover` text format.
//!
//! A document names a tower of graphs level by level. In `bouquet` mode each
//! cycle of level `n` is declared by its image, a formula over the symbols
//! of level `n - 1`:
//!
//! ```text
//! cover example version 1 mode bouquet
//! level 0 { }
//! level 1 { c1[10] := 10 e; }
//! level 2 {
//!   c1 := sum(j=1..k) { j e + 2 c1 } + e + e;   # k = 2 (1 + |c1|) = 22
//!   c2 := 90 e;
//! }
//! ```
//!
//! `[len]` optionally declares the cycle length, which validation checks.
//! In `materialized` mode a level lists `vertices N;`, `edges u->v, ...;`
//! and (above level 0) `map a, b, ...;` sending each vertex one level down.
//! `#` starts a comment.

mod ast;
mod builtin;
mod lexer;
mod parser;
mod serialize;
mod validate;

use thiserror::Error;

pub use ast::{
    AtomRef, Bound, Coeff, Comprehension, CoverDocument, CycleDecl, FormulaTerm, GraphDecl, LevelBlock, LevelBody,
    Mode, SumTerm, FORMAT_VERSION,
};
pub use builtin::{builtin_document, mutation_corpus, Mutant};
pub use parser::parse;
pub use serialize::serialize;
pub use validate::{
    builtin_equivalence, equivalence_mismatches, k_of, lower_formula, to_construction, to_materialized,
    validate_document, Mismatch, Violation,
};

use crate::bouquet::BouquetError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{line}:{column}: unexpected character {found:?}")]
    Lex { line: usize, column: usize, found: char },
    #[error("{line}:{column}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },
    #[error("document is invalid: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("operation needs a {expected:?} document")]
    WrongMode { expected: Mode },
    #[error(transparent)]
    Bouquet(#[from] BouquetError),
}

fn join(vs: &[Violation]) -> String {
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// JSON form of a parsed document, mirroring the grammar.
pub fn to_json(doc: &CoverDocument) -> String {
    serde_json::to_string_pretty(doc).expect("plain data")
}
