use num_bigint::BigUint;
use thiserror::Error;

use crate::hsi::{AxiomId, Direction, RewriteStep};
use crate::syntax::Path;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unbound individual variable `{name}` at {line}:{column}")]
    Unbound {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("algebraic syntax covers propositional formulas only")]
    FlavorMismatch,

    #[error("first-order input is not accepted here")]
    NotPropositional,

    #[error("no value assigned to `{0}`")]
    Unassigned(String),

    #[error("value too large to evaluate: {0}")]
    Overflow(String),

    #[error("denotation has {cardinality} elements, above the cap of {cap}")]
    TooLarge { cardinality: BigUint, cap: u64 },

    #[error("path {path} does not address a node")]
    BadPath { path: Path },

    #[error("{axiom:?} {dir} does not match at {path}")]
    NoMatch {
        axiom: AxiomId,
        dir: Direction,
        path: Path,
    },

    #[error("{axiom:?} at {path}: bound variable `{var}` would be captured")]
    SideCondition {
        axiom: AxiomId,
        path: Path,
        var: String,
    },

    #[error("replay failed at step {index}: {reason}")]
    StepMismatch { index: usize, reason: String },

    #[error("node cap of {cap} exceeded after {} steps", .partial.len())]
    SizeGuard {
        cap: usize,
        partial: Vec<RewriteStep>,
    },

    #[error("ill-typed proof term: {0}")]
    Type(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}
