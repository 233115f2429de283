use super::ast::{to_term, Formula, SyntaxFlavor, Term};
use crate::error::{Error, Result};

/// Prints `f` so that parsing the result in the same flavor gives `f` back.
pub fn print(f: &Formula, flavor: SyntaxFlavor) -> Result<String> {
    match flavor {
        SyntaxFlavor::Logical => Ok(logical(f, 0)),
        SyntaxFlavor::Algebraic => {
            if f.has_quantifiers() {
                return Err(Error::FlavorMismatch);
            }
            Ok(print_term(&to_term(f)))
        }
    }
}

fn paren(s: String, wrap: bool) -> String {
    if wrap {
        format!("({s})")
    } else {
        s
    }
}

fn prime(name: &str, args: &[String]) -> String {
    if args.is_empty() {
        name.to_string()
    } else {
        format!("{name}({})", args.join(","))
    }
}

// Levels: 0 binder body, 1 `->`, 2 `|`, 3 `&`, 4 operand.
fn logical(f: &Formula, ctx: u8) -> String {
    match f {
        Formula::Prime { name, args } => prime(name, args),
        Formula::Top => "T".to_string(),
        Formula::Implies(a, b) => paren(format!("{} -> {}", logical(a, 2), logical(b, 1)), ctx > 1),
        Formula::Or(a, b) => paren(format!("{} | {}", logical(a, 2), logical(b, 3)), ctx > 2),
        Formula::And(a, b) => paren(format!("{} & {}", logical(a, 3), logical(b, 4)), ctx > 3),
        Formula::Forall(x, b) => paren(format!("all {x}. {}", logical(b, 0)), ctx > 0),
        Formula::Exists(x, b) => paren(format!("ex {x}. {}", logical(b, 0)), ctx > 0),
    }
}

/// Algebraic rendering of a term; binders print as `sum x.` / `prod x.`.
pub fn print_term(t: &Term) -> String {
    algebraic(t, 0)
}

// Levels: 0 binder body, 1 `+`, 2 `*`, 3 exponent, 4 base.
fn algebraic(t: &Term, ctx: u8) -> String {
    match t {
        Term::Var { name, args } => prime(name, args),
        Term::One => "1".to_string(),
        Term::Sum(a, b) => paren(format!("{} + {}", algebraic(a, 1), algebraic(b, 2)), ctx > 1),
        Term::Prod(a, b) => paren(format!("{} * {}", algebraic(a, 2), algebraic(b, 3)), ctx > 2),
        Term::Pow(a, b) => paren(format!("{} ^ {}", algebraic(a, 4), algebraic(b, 3)), ctx > 3),
        Term::QSum(x, b) => paren(format!("sum {x}. {}", algebraic(b, 0)), ctx > 0),
        Term::QProd(x, b) => paren(format!("prod {x}. {}", algebraic(b, 0)), ctx > 0),
    }
}
