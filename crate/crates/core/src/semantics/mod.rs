//! Formulas over positive naturals and over finite sets.
//!
//! Quantifiers are read over explicit finite domains: `∃x` sums and `∀x`
//! multiplies over `{0, …, d-1}`. This is one interpretation of the extended
//! operations, chosen here; other readings are possible.

mod eval;
mod finset;
mod search;

pub use eval::{eval, Assignment, MAX_BITS};
pub(crate) use eval::big_json;
pub(crate) use finset::denote_in;
pub use finset::{cardinality, denote, Elem, FinModel, FinSet, DEFAULT_CAP};
pub use search::{search_counterexample, SearchBudget, Verdict};
