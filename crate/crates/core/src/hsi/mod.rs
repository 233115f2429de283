//! High-school identities and the four quantifier equations as a rewrite
//! system, with a normal form whose derivation is recorded step by step.

mod axiom;
mod normal;
mod trace;

pub(crate) use axiom::{instantiate_sides, match_source};

pub use axiom::{
    apply_axiom, match_step, unbound_metas, AxiomId, Direction, Pat, RewriteStep, Schema, Subst, BINDER, PHI, PSI, XI,
};
pub use normal::{
    normal_form, normal_form_capped, Arg, Base, Factor, Monomial, NormalTerm, QuantKind, DEFAULT_NODE_CAP,
};
pub use trace::{prove_equal, prove_equal_capped, replay, step_to_json, steps_from_json, RewriteTrace};
