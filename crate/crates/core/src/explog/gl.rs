use serde::Serialize;

use crate::error::{Error, Result};
use crate::syntax::{Formula, Path};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassMembership {
    pub in_class: bool,
    /// First violating subformula in pre-order; present iff not in the class.
    pub witness_path: Option<Path>,
}

/// Membership in the class L of propositional formulas. ⊤ counts as a
/// variable-free leaf of both L and Λ.
pub fn gl_member(f: &Formula) -> Result<ClassMembership> {
    if !f.is_propositional() {
        return Err(Error::NotPropositional);
    }
    let mut path = Path::root();
    let ok = in_l(f, &mut path);
    Ok(ClassMembership {
        in_class: ok,
        witness_path: (!ok).then_some(path),
    })
}

// On failure `path` is left pointing at the witness.
fn in_l(f: &Formula, path: &mut Path) -> bool {
    match f {
        Formula::Prime { .. } | Formula::Top => true,
        Formula::And(a, b) | Formula::Or(a, b) => both(a, b, path, in_l, in_l),
        Formula::Implies(a, b) => both(a, b, path, in_l, in_lambda),
        _ => false,
    }
}

fn in_lambda(f: &Formula, path: &mut Path) -> bool {
    match f {
        Formula::Prime { .. } | Formula::Top => true,
        Formula::And(a, b) | Formula::Or(a, b) => both(a, b, path, in_lambda, in_lambda),
        Formula::Implies(a, b) => both(a, b, path, in_lambda, in_lambda0),
        _ => false,
    }
}

fn in_lambda0(f: &Formula, path: &mut Path) -> bool {
    if let Some(p) = first_variable(f) {
        path.0.extend(p.0);
        return false;
    }
    in_lambda(f, path)
}

fn first_variable(f: &Formula) -> Option<Path> {
    if let Formula::Prime { .. } = f {
        return Some(Path::root());
    }
    for (i, c) in f.children().into_iter().enumerate() {
        if let Some(mut p) = first_variable(c) {
            p.0.insert(0, i);
            return Some(p);
        }
    }
    None
}

fn both(
    a: &Formula,
    b: &Formula,
    path: &mut Path,
    left: fn(&Formula, &mut Path) -> bool,
    right: fn(&Formula, &mut Path) -> bool,
) -> bool {
    for (i, g, check) in [(0, a, left), (1, b, right)] {
        path.0.push(i);
        if !check(g, path) {
            return false;
        }
        path.0.pop();
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, SyntaxFlavor};

    fn member(s: &str) -> ClassMembership {
        gl_member(&parse(s, SyntaxFlavor::Logical).unwrap()).unwrap()
    }

    #[test]
    fn members() {
        for s in ["a -> b", "a -> b -> T | T", "(a | b) & c", "(a -> b) -> c -> T"] {
            let m = member(s);
            assert!(m.in_class && m.witness_path.is_none(), "{s}");
        }
    }

    #[test]
    fn non_members_point_at_the_variable() {
        assert_eq!(member("a -> b -> c").witness_path, Some(Path(vec![1, 1])));
        assert_eq!(member("(a -> b -> c) & d").witness_path, Some(Path(vec![0, 1, 1])));
        assert_eq!(member("a -> (b -> c) | d").witness_path, Some(Path(vec![1, 0, 1])));
        assert_eq!(member("a -> b -> (T & c)").witness_path, Some(Path(vec![1, 1, 1])));
    }

    #[test]
    fn first_order_is_rejected() {
        let f = parse("all x. P(x)", SyntaxFlavor::Logical).unwrap();
        assert!(matches!(gl_member(&f), Err(Error::NotPropositional)));
    }
}
