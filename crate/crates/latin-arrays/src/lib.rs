//! Transversals in Latin and row-Latin arrays.
//!
//! A transversal of an `n x n` array is a selection of `n` entries, no two
//! of which share a row, column, or symbol. This crate provides:
//!
//! - the array carrier type ([`GridArray`]) with a plain text format;
//! - exact transversal search, counting, and maximum-partial-transversal
//!   computation ([`transversal`]);
//! - canonical forms under the trisotopy group (row perms x column perms x
//!   symbol renaming x transposition) ([`trisotopy`]);
//! - catalogues of transversal-free arrays at small orders, built either by
//!   direct orderly generation or by the hole/extension pipeline
//!   ([`catalogue`]);
//! - executable certificates: the Delta-lemma transversal-freeness check and
//!   exact-arithmetic symbol-count thresholds that guarantee transversals
//!   ([`certificates`]);
//! - the clique local-lemma condition over the bad-event model of a random
//!   permutation, plus a seeded randomized transversal finder ([`lll`]);
//! - random array generators for property sweeps ([`sample`]).
//!
//! The `parallel` feature (on by default) parallelizes counting and the
//! catalogue pipeline with rayon; with the feature disabled every code path
//! falls back to sequential execution with identical results.

pub mod catalogue;
pub mod certificates;
pub mod grid;
pub mod lll;
pub mod sample;
pub mod symset;
pub mod transversal;
pub mod trisotopy;

pub use grid::{classify_symbols, parse_array, render_array, Cell, Entry, GridArray};
pub use transversal::{
    count_transversals, find_transversal, has_transversal, max_partial_transversal, Transversal,
};
pub use trisotopy::{are_trisotopic, canonical_form, fingerprint, CanonicalKey};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    #[error("array has no rows")]
    EmptyArray,
    #[error("rows have unequal lengths")]
    RaggedRows,
    #[error("expected {expected} cells, got {got}")]
    BadCellCount { expected: usize, got: usize },
    #[error("expected {expected} labels, got {got}")]
    BadLabelCount { expected: usize, got: usize },
    #[error("order {order} exceeds the supported maximum")]
    OrderLimit { order: usize },
    #[error("symbol id {id} exceeds the supported alphabet")]
    AlphabetLimit { id: u16 },
    #[error("symbol ids are not contiguous")]
    NonContiguousAlphabet,
    #[error("index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("array is not Latin")]
    NotLatin,
    #[error("array is not row-Latin")]
    NotRowLatin,
    #[error("empty row or column subset")]
    EmptySubset,
    #[error("parameter {name}={value} out of range")]
    ParamOutOfRange { name: &'static str, value: i64 },
    #[error("row {row} contains no clone")]
    NoCloneInRow { row: usize },
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("catalogue incomplete: {0}")]
    IncompleteCatalogue(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("malformed record: {0}")]
    MalformedRecord(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
