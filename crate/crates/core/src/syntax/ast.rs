use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// First-order formulas over prime formulas and ⊤, built with ∧, ∨, ⇒, ∀, ∃.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Prime { name: String, args: Vec<String> },
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

/// Exponential polynomials, extended with `QSum` (∃) and `QProd` (∀) binders.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var { name: String, args: Vec<String> },
    One,
    Sum(Box<Term>, Box<Term>),
    Prod(Box<Term>, Box<Term>),
    Pow(Box<Term>, Box<Term>),
    QSum(String, Box<Term>),
    QProd(String, Box<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyntaxFlavor {
    Logical,
    Algebraic,
}

/// Child indices from the root. Binary nodes use 0/1, binders use 0 for the body.
///
/// For `Formula::Implies` child 0 is the antecedent; for `Term::Pow` child 0 is
/// the base, so the two orders are swapped by [`to_term`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        Path(v)
    }

    pub fn join(&self, suffix: &Path) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&suffix.0);
        Path(v)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl From<Vec<usize>> for Path {
    fn from(v: Vec<usize>) -> Self {
        Path(v)
    }
}

// ---- constructors ----------------------------------------------------------

impl Formula {
    pub fn atom(name: &str) -> Self {
        Formula::Prime {
            name: name.to_string(),
            args: Vec::new(),
        }
    }

    pub fn pred(name: &str, args: &[&str]) -> Self {
        Formula::Prime {
            name: name.to_string(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(x: &str, body: Formula) -> Self {
        Formula::Forall(x.to_string(), Box::new(body))
    }

    pub fn exists(x: &str, body: Formula) -> Self {
        Formula::Exists(x.to_string(), Box::new(body))
    }

    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Prime { args, .. } => args.is_empty(),
            Formula::Top => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    pub fn has_quantifiers(&self) -> bool {
        match self {
            Formula::Prime { .. } | Formula::Top => false,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.has_quantifiers() || b.has_quantifiers()
            }
            Formula::Forall(..) | Formula::Exists(..) => true,
        }
    }

    /// Names of the prime formulas (predicate symbols), sorted.
    pub fn atom_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Prime { name, .. } => {
                out.insert(name.clone());
            }
            Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => b.collect_atoms(out),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Prime { .. } | Formula::Top => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + b.size(),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Prime { .. } | Formula::Top => vec![],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
            Formula::Forall(_, b) | Formula::Exists(_, b) => vec![b],
        }
    }

    fn child_mut(&mut self, i: usize) -> Option<&mut Formula> {
        match (self, i) {
            (Formula::And(a, _) | Formula::Or(a, _) | Formula::Implies(a, _), 0) => Some(a),
            (Formula::And(_, b) | Formula::Or(_, b) | Formula::Implies(_, b), 1) => Some(b),
            (Formula::Forall(_, b) | Formula::Exists(_, b), 0) => Some(b),
            _ => None,
        }
    }

    pub fn at(&self, path: &Path) -> Option<&Formula> {
        let mut cur = self;
        for &i in &path.0 {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    pub fn at_mut(&mut self, path: &Path) -> Option<&mut Formula> {
        let mut cur = self;
        for &i in &path.0 {
            cur = cur.child_mut(i)?;
        }
        Some(cur)
    }

    /// Free individual variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Prime { args, .. } => {
                for a in args {
                    if !bound.contains(a) {
                        out.insert(a.clone());
                    }
                }
            }
            Formula::Top => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, b) | Formula::Exists(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Capture-avoiding substitution of individual variable `from` by `to`.
    pub fn subst_var(&self, from: &str, to: &str) -> Formula {
        from_term(&to_term(self).subst_var(from, to))
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        to_term(self).alpha_eq(&to_term(other))
    }
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var {
            name: name.to_string(),
            args: Vec::new(),
        }
    }

    pub fn sum(a: Term, b: Term) -> Self {
        Term::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Term, b: Term) -> Self {
        Term::Prod(Box::new(a), Box::new(b))
    }

    pub fn pow(base: Term, exp: Term) -> Self {
        Term::Pow(Box::new(base), Box::new(exp))
    }

    pub fn qsum(x: &str, body: Term) -> Self {
        Term::QSum(x.to_string(), Box::new(body))
    }

    pub fn qprod(x: &str, body: Term) -> Self {
        Term::QProd(x.to_string(), Box::new(body))
    }

    /// The numeral `k` as `1 + (1 + … )`.
    pub fn numeral(k: usize) -> Self {
        assert!(k >= 1, "numerals are positive");
        let mut t = Term::One;
        for _ in 1..k {
            t = Term::sum(Term::One, t);
        }
        t
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var { .. } | Term::One => 1,
            Term::Sum(a, b) | Term::Prod(a, b) | Term::Pow(a, b) => 1 + a.size() + b.size(),
            Term::QSum(_, b) | Term::QProd(_, b) => 1 + b.size(),
        }
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var { .. } | Term::One => vec![],
            Term::Sum(a, b) | Term::Prod(a, b) | Term::Pow(a, b) => vec![a, b],
            Term::QSum(_, b) | Term::QProd(_, b) => vec![b],
        }
    }

    fn child_mut(&mut self, i: usize) -> Option<&mut Term> {
        match (self, i) {
            (Term::Sum(a, _) | Term::Prod(a, _) | Term::Pow(a, _), 0) => Some(a),
            (Term::Sum(_, b) | Term::Prod(_, b) | Term::Pow(_, b), 1) => Some(b),
            (Term::QSum(_, b) | Term::QProd(_, b), 0) => Some(b),
            _ => None,
        }
    }

    pub fn at(&self, path: &Path) -> Option<&Term> {
        let mut cur = self;
        for &i in &path.0 {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    pub fn at_mut(&mut self, path: &Path) -> Option<&mut Term> {
        let mut cur = self;
        for &i in &path.0 {
            cur = cur.child_mut(i)?;
        }
        Some(cur)
    }

    /// All node positions in pre-order.
    pub fn positions(&self) -> Vec<Path> {
        let mut out = Vec::new();
        fn go(t: &Term, p: &mut Vec<usize>, out: &mut Vec<Path>) {
            out.push(Path(p.clone()));
            for (i, c) in t.children().into_iter().enumerate() {
                p.push(i);
                go(c, p, out);
                p.pop();
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_propositional(&self) -> bool {
        match self {
            Term::Var { args, .. } => args.is_empty(),
            Term::One => true,
            Term::Sum(a, b) | Term::Prod(a, b) | Term::Pow(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            Term::QSum(..) | Term::QProd(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var { args, .. } => {
                for a in args {
                    if !bound.contains(a) {
                        out.insert(a.clone());
                    }
                }
            }
            Term::One => {}
            Term::Sum(a, b) | Term::Prod(a, b) | Term::Pow(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::QSum(x, b) | Term::QProd(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var { args, .. } => out.extend(args.iter().cloned()),
            Term::One => {}
            Term::Sum(a, b) | Term::Prod(a, b) | Term::Pow(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Term::QSum(x, b) | Term::QProd(x, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
        }
    }

    /// Capture-avoiding substitution of individual variable `from` by `to`.
    pub fn subst_var(&self, from: &str, to: &str) -> Term {
        match self {
            Term::Var { name, args } => Term::Var {
                name: name.clone(),
                args: args
                    .iter()
                    .map(|a| if a == from { to.to_string() } else { a.clone() })
                    .collect(),
            },
            Term::One => Term::One,
            Term::Sum(a, b) => Term::sum(a.subst_var(from, to), b.subst_var(from, to)),
            Term::Prod(a, b) => Term::prod(a.subst_var(from, to), b.subst_var(from, to)),
            Term::Pow(a, b) => Term::pow(a.subst_var(from, to), b.subst_var(from, to)),
            Term::QSum(x, b) | Term::QProd(x, b) => {
                let rebuild = |x: String, b: Term| match self {
                    Term::QSum(..) => Term::QSum(x, Box::new(b)),
                    _ => Term::QProd(x, Box::new(b)),
                };
                if x == from || !b.free_vars().contains(from) {
                    return self.clone();
                }
                if x == to {
                    let mut used = BTreeSet::new();
                    b.all_names(&mut used);
                    used.insert(to.to_string());
                    used.insert(from.to_string());
                    let fresh = fresh_name(x, &used);
                    let body = b.subst_var(x, &fresh).subst_var(from, to);
                    rebuild(fresh, body)
                } else {
                    rebuild(x.clone(), b.subst_var(from, to))
                }
            }
        }
    }

    /// Equality up to renaming of bound individual variables.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        fn go(a: &Term, b: &Term, env: &mut Vec<(String, String)>) -> bool {
            match (a, b) {
                (Term::Var { name: n1, args: a1 }, Term::Var { name: n2, args: a2 }) => {
                    n1 == n2
                        && a1.len() == a2.len()
                        && a1.iter().zip(a2).all(|(x, y)| {
                            let bx = env.iter().rposition(|(l, _)| l == x);
                            let by = env.iter().rposition(|(_, r)| r == y);
                            match (bx, by) {
                                (Some(i), Some(j)) => i == j,
                                (None, None) => x == y,
                                _ => false,
                            }
                        })
                }
                (Term::One, Term::One) => true,
                (Term::Sum(a1, a2), Term::Sum(b1, b2))
                | (Term::Prod(a1, a2), Term::Prod(b1, b2))
                | (Term::Pow(a1, a2), Term::Pow(b1, b2)) => go(a1, b1, env) && go(a2, b2, env),
                (Term::QSum(x, a), Term::QSum(y, b)) | (Term::QProd(x, a), Term::QProd(y, b)) => {
                    env.push((x.clone(), y.clone()));
                    let r = go(a, b, env);
                    env.pop();
                    r
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }
}

/// `base`, `base1`, `base2`, … : the first candidate not in `used`.
/// Trailing digits of `base` are stripped first so `x1` freshens to `x2`.
pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    if !used.contains(base) {
        return base.to_string();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { base } else { stem };
    if !used.contains(stem) {
        return stem.to_string();
    }
    (1..)
        .map(|k| format!("{stem}{k}"))
        .find(|c| !used.contains(c))
        .expect("infinitely many candidates")
}

// ---- formulas <-> terms ----------------------------------------------------

/// ∨→Sum, ∧→Prod, (ψ⇒φ)→Pow(φ,ψ), ⊤→One, ∃→QSum, ∀→QProd.
pub fn to_term(f: &Formula) -> Term {
    match f {
        Formula::Prime { name, args } => Term::Var {
            name: name.clone(),
            args: args.clone(),
        },
        Formula::Top => Term::One,
        Formula::Or(a, b) => Term::sum(to_term(a), to_term(b)),
        Formula::And(a, b) => Term::prod(to_term(a), to_term(b)),
        Formula::Implies(a, b) => Term::pow(to_term(b), to_term(a)),
        Formula::Exists(x, b) => Term::qsum(x, to_term(b)),
        Formula::Forall(x, b) => Term::qprod(x, to_term(b)),
    }
}

pub fn from_term(t: &Term) -> Formula {
    match t {
        Term::Var { name, args } => Formula::Prime {
            name: name.clone(),
            args: args.clone(),
        },
        Term::One => Formula::Top,
        Term::Sum(a, b) => Formula::or(from_term(a), from_term(b)),
        Term::Prod(a, b) => Formula::and(from_term(a), from_term(b)),
        Term::Pow(base, exp) => Formula::implies(from_term(exp), from_term(base)),
        Term::QSum(x, b) => Formula::exists(x, from_term(b)),
        Term::QProd(x, b) => Formula::forall(x, from_term(b)),
    }
}

/// Translates a formula position into the corresponding term position.
pub fn formula_path_to_term(f: &Formula, path: &Path) -> Option<Path> {
    let mut cur = f;
    let mut out = Vec::with_capacity(path.0.len());
    for &i in &path.0 {
        let mapped = match cur {
            Formula::Implies(..) => 1 - i.min(1),
            _ => i,
        };
        cur = *cur.children().get(i)?;
        out.push(mapped);
    }
    Some(Path(out))
}

/// Inverse of [`formula_path_to_term`].
pub fn term_path_to_formula(t: &Term, path: &Path) -> Option<Path> {
    let mut cur = t;
    let mut out = Vec::with_capacity(path.0.len());
    for &i in &path.0 {
        let mapped = match cur {
            Term::Pow(..) => 1 - i.min(1),
            _ => i,
        };
        cur = *cur.children().get(i)?;
        out.push(mapped);
    }
    Some(Path(out))
}

// ---- renaming apart --------------------------------------------------------

/// Renames binders so that every bound variable is distinct from every other
/// binder and from all free variables. Fresh names follow `x, x1, x2, …`.
pub fn rename_apart(f: &Formula) -> Formula {
    from_term(&rename_apart_term(&to_term(f)))
}

pub fn rename_apart_term(t: &Term) -> Term {
    let mut used = t.free_vars();
    rename_rec(t, &mut used, &mut Vec::new())
}

fn rename_rec(t: &Term, used: &mut BTreeSet<String>, scope: &mut Vec<(String, String)>) -> Term {
    match t {
        Term::Var { name, args } => Term::Var {
            name: name.clone(),
            args: args
                .iter()
                .map(|a| {
                    scope
                        .iter()
                        .rev()
                        .find(|(old, _)| old == a)
                        .map(|(_, new)| new.clone())
                        .unwrap_or_else(|| a.clone())
                })
                .collect(),
        },
        Term::One => Term::One,
        Term::Sum(a, b) => {
            let a = rename_rec(a, used, scope);
            Term::sum(a, rename_rec(b, used, scope))
        }
        Term::Prod(a, b) => {
            let a = rename_rec(a, used, scope);
            Term::prod(a, rename_rec(b, used, scope))
        }
        Term::Pow(a, b) => {
            let a = rename_rec(a, used, scope);
            Term::pow(a, rename_rec(b, used, scope))
        }
        Term::QSum(x, b) | Term::QProd(x, b) => {
            let fresh = fresh_name(x, used);
            used.insert(fresh.clone());
            scope.push((x.clone(), fresh.clone()));
            let body = rename_rec(b, used, scope);
            scope.pop();
            match t {
                Term::QSum(..) => Term::QSum(fresh, Box::new(body)),
                _ => Term::QProd(fresh, Box::new(body)),
            }
        }
    }
}

/// True when all binders are pairwise distinct and distinct from free variables.
pub fn is_renamed_apart(t: &Term) -> bool {
    let mut seen = t.free_vars();
    fn go(t: &Term, seen: &mut BTreeSet<String>) -> bool {
        match t {
            Term::Var { .. } | Term::One => true,
            Term::Sum(a, b) | Term::Prod(a, b) | Term::Pow(a, b) => go(a, seen) && go(b, seen),
            Term::QSum(x, b) | Term::QProd(x, b) => seen.insert(x.clone()) && go(b, seen),
        }
    }
    go(t, &mut seen)
}
