//! Formula and term ASTs, their correspondence, and concrete syntax.

mod ast;
mod parse;
mod print;

pub use ast::{
    formula_path_to_term, fresh_name, from_term, is_renamed_apart, rename_apart, rename_apart_term,
    term_path_to_formula, to_term, Formula, Path, SyntaxFlavor, Term,
};
pub use parse::{parse, parse_term, parse_with_free};
pub use print::{print, print_term};
