//! Lambda-term witnesses for isomorphisms: one pair per axiom instance,
//! lifted into context and composed along traces, then checked on finite
//! models.

mod check;
mod eval;
mod pair;
mod term;

pub use check::type_check;
pub use eval::RoundTrip;
pub use pair::{
    axiom_witness, compose_term_trace, compose_trace, lift_witness, probe_models, verify_roundtrip, WitnessPair, WITNESS_CAP,
};
pub use term::ProofTerm;
