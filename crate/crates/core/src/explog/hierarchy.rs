use std::fmt;

use serde::{Deserialize, Serialize};

use super::enf::enf;
use crate::error::{Error, Result};
use crate::syntax::{Formula, Path};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Sigma,
    Pi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HierarchyLevel {
    pub side: Side,
    pub n: u32,
}

impl fmt::Display for HierarchyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::Sigma => "Σ",
            Side::Pi => "Π",
        };
        write!(f, "{s}{}", self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PiSigma {
    InPi,
    InSigma,
    /// Path to a smallest offending subformula: one that is in neither class
    /// while all of its immediate subformulas are.
    Neither(Path),
}

fn conjuncts<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        _ => out.push(f),
    }
}

fn disjuncts<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::Or(a, b) => {
            disjuncts(a, out);
            disjuncts(b, out);
        }
        _ => out.push(f),
    }
}

/// Minimal n with `f` in Πn, if `f` is Π-shaped at all.
pub(crate) fn pi_level(f: &Formula) -> Option<u32> {
    match f {
        Formula::Top => return Some(0),
        Formula::Implies(a, b) if **a == Formula::Top && matches!(**b, Formula::Prime { .. }) => return Some(0),
        _ => {}
    }
    let mut cs = Vec::new();
    conjuncts(f, &mut cs);
    let mut n = 0;
    for mut c in cs {
        while let Formula::Forall(_, body) = c {
            c = body;
        }
        match c {
            Formula::Implies(g, b) => {
                pi_level(g)?;
                n = n.max(sigma_level(b)?);
            }
            _ => return None,
        }
    }
    Some(n + 1)
}

/// Minimal n with `f` in Σn, if `f` is Σ-shaped at all.
pub(crate) fn sigma_level(f: &Formula) -> Option<u32> {
    match f {
        Formula::Prime { .. } => Some(0),
        Formula::Or(..) => {
            let mut ds = Vec::new();
            disjuncts(f, &mut ds);
            let mut n = 0;
            for d in ds {
                n = n.max(pi_level(d)?);
            }
            Some(n + 1)
        }
        Formula::Exists(_, g) => Some(pi_level(g)? + 1),
        _ => None,
    }
}

fn in_either(f: &Formula) -> bool {
    sigma_level(f).is_some() || pi_level(f).is_some()
}

pub fn check_pi_sigma(f: &Formula) -> PiSigma {
    if sigma_level(f).is_some() {
        return PiSigma::InSigma;
    }
    if pi_level(f).is_some() {
        return PiSigma::InPi;
    }
    let mut path = Path::root();
    let mut cur = f;
    'descend: loop {
        for (i, c) in cur.children().into_iter().enumerate() {
            if !in_either(c) {
                path = path.child(i);
                cur = c;
                continue 'descend;
            }
        }
        return PiSigma::Neither(path);
    }
}

/// Level of a formula that is already in exp-log normal form.
pub fn level_of_normal(f: &Formula) -> Option<HierarchyLevel> {
    if let Some(n) = sigma_level(f) {
        return Some(HierarchyLevel { side: Side::Sigma, n });
    }
    pi_level(f).map(|n| HierarchyLevel { side: Side::Pi, n })
}

/// Level of `f` through its exp-log normal form.
pub fn level(f: &Formula) -> Result<HierarchyLevel> {
    let normal = enf(f)?.normal;
    level_of_normal(&normal).ok_or_else(|| Error::Invalid("normal form left the Π/Σ grammar".into()))
}

/// Classical level from the alternation of the quantifier prefix, when the
/// rest of `f` is quantifier-free.
pub fn prenex_level(f: &Formula) -> Option<HierarchyLevel> {
    let mut blocks = 0;
    let mut first = None;
    let mut last = None;
    let mut cur = f;
    loop {
        let (side, body) = match cur {
            Formula::Forall(_, b) => (Side::Pi, b),
            Formula::Exists(_, b) => (Side::Sigma, b),
            _ => break,
        };
        if last != Some(side) {
            blocks += 1;
            last = Some(side);
        }
        first.get_or_insert(side);
        cur = body;
    }
    if cur.has_quantifiers() {
        return None;
    }
    Some(HierarchyLevel {
        side: first.unwrap_or(Side::Sigma),
        n: blocks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelComparison {
    pub int_level: HierarchyLevel,
    pub cl_level: HierarchyLevel,
    /// The classical level is at most the intuitionistic one.
    pub consistent: bool,
}

/// `None` when `f` is not prenex.
pub fn compare_levels(f: &Formula) -> Result<Option<LevelComparison>> {
    let Some(cl_level) = prenex_level(f) else {
        return Ok(None);
    };
    let int_level = level(f)?;
    Ok(Some(LevelComparison {
        int_level,
        cl_level,
        consistent: cl_level.n <= int_level.n,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, SyntaxFlavor};

    fn f(s: &str) -> Formula {
        parse(s, SyntaxFlavor::Logical).unwrap()
    }

    fn lv(side: Side, n: u32) -> HierarchyLevel {
        HierarchyLevel { side, n }
    }

    #[test]
    fn grammar_membership() {
        assert_eq!(check_pi_sigma(&f("(T -> a) | (T -> b)")), PiSigma::InSigma);
        assert_eq!(check_pi_sigma(&Formula::Top), PiSigma::InPi);
        assert_eq!(check_pi_sigma(&f("a | b & c")), PiSigma::Neither(Path(vec![1])));
        assert_eq!(check_pi_sigma(&f("a | b")), PiSigma::Neither(Path::root()));
        assert_eq!(check_pi_sigma(&f("all x. ex y. T -> P(x)")), PiSigma::Neither(Path::root()));
        assert_eq!(check_pi_sigma(&f("all x. T -> (ex y. T -> P(x))")), PiSigma::InPi);
    }

    #[test]
    fn levels() {
        assert_eq!(level(&f("P")).unwrap(), lv(Side::Sigma, 0));
        assert_eq!(level(&f("all x. P(x)")).unwrap(), lv(Side::Pi, 1));
        assert_eq!(level(&f("ex x. P(x)")).unwrap(), lv(Side::Sigma, 1));
        assert_eq!(level(&f("all x. ex y. P(x,y)")).unwrap(), lv(Side::Pi, 2));
        assert_eq!(level(&f("ex x. all y. P(x,y)")).unwrap(), lv(Side::Sigma, 2));
        assert_eq!(level(&f("ex y. all x. P(x,y)")).unwrap(), lv(Side::Sigma, 2));
        assert_eq!(level(&Formula::Top).unwrap(), lv(Side::Pi, 0));
        assert_eq!(level(&f("T -> a")).unwrap(), lv(Side::Pi, 0));
        assert_eq!(level(&f("a -> b")).unwrap(), lv(Side::Pi, 1));
    }

    #[test]
    fn prenex_levels() {
        assert_eq!(prenex_level(&f("all x. ex y. P(x,y)")), Some(lv(Side::Pi, 2)));
        assert_eq!(prenex_level(&f("all x. all z. ex y. P(x,y)")), Some(lv(Side::Pi, 2)));
        assert_eq!(prenex_level(&f("P")), Some(lv(Side::Sigma, 0)));
        assert_eq!(prenex_level(&f("(all x. P(x)) -> Q")), None);
    }

    #[test]
    fn comparisons() {
        let c = compare_levels(&f("all x. ex y. P(x,y)")).unwrap().unwrap();
        assert_eq!((c.int_level, c.cl_level, c.consistent), (lv(Side::Pi, 2), lv(Side::Pi, 2), true));
        let c = compare_levels(&f("ex x. P(x)")).unwrap().unwrap();
        assert_eq!((c.int_level, c.cl_level), (lv(Side::Sigma, 1), lv(Side::Sigma, 1)));
        let c = compare_levels(&f("P")).unwrap().unwrap();
        assert_eq!((c.int_level, c.cl_level), (lv(Side::Sigma, 0), lv(Side::Sigma, 0)));
        assert!(compare_levels(&f("(all x. P(x)) -> Q")).unwrap().is_none());
    }
}
