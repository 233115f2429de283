//! Formulas read as exponential polynomials.
//!
//! Disjunction is `+`, conjunction is `*`, and `ψ -> φ` is `φ ^ ψ`. On top of
//! that reading the crate offers:
//!
//! * [`semantics`]: exact evaluation over positive naturals, finite-set
//!   denotations, and counterexample search (unequal values refute isomorphism);
//! * [`hsi`]: the high-school identities as a rewrite system with replayable
//!   traces; equal normal forms prove isomorphism;
//! * [`explog`]: the exp-log normal form and the intuitionistic arithmetical
//!   hierarchy;
//! * [`witness`]: lambda-term isomorphism witnesses checked on finite models;
//! * [`cli`]: the `isopoly` command-line front end.

pub mod cli;
pub mod error;
pub mod explog;
pub mod hsi;
pub mod semantics;
pub mod syntax;
pub mod witness;

pub use error::{Error, Result};
pub use syntax::{Formula, Path, SyntaxFlavor, Term};
