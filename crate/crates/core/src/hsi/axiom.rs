use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{fresh_name, Path, Term};

/// The eleven non-trivial high-school identities, the four quantifier
/// equations, and `QProdOne` (`1^x = 1`, i.e. `∀x.⊤ ≅ ⊤`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxiomId {
    AddComm,
    AddAssoc,
    MulComm,
    MulAssoc,
    Distrib,
    MulOne,
    PowOne,
    OnePow,
    PowAddExp,
    PowMulBase,
    PowPow,
    QProdMul,
    QSumAdd,
    QSumExp,
    QProdExp,
    QProdOne,
}

impl AxiomId {
    pub const ALL: [AxiomId; 16] = [
        AxiomId::AddComm,
        AxiomId::AddAssoc,
        AxiomId::MulComm,
        AxiomId::MulAssoc,
        AxiomId::Distrib,
        AxiomId::MulOne,
        AxiomId::PowOne,
        AxiomId::OnePow,
        AxiomId::PowAddExp,
        AxiomId::PowMulBase,
        AxiomId::PowPow,
        AxiomId::QProdMul,
        AxiomId::QSumAdd,
        AxiomId::QSumExp,
        AxiomId::QProdExp,
        AxiomId::QProdOne,
    ];

    /// The eleven high-school identities proper.
    pub const HSI: [AxiomId; 11] = [
        AxiomId::AddComm,
        AxiomId::AddAssoc,
        AxiomId::MulComm,
        AxiomId::MulAssoc,
        AxiomId::Distrib,
        AxiomId::MulOne,
        AxiomId::PowOne,
        AxiomId::OnePow,
        AxiomId::PowAddExp,
        AxiomId::PowMulBase,
        AxiomId::PowPow,
    ];

    pub fn is_quantifier(self) -> bool {
        matches!(
            self,
            AxiomId::QProdMul | AxiomId::QSumAdd | AxiomId::QSumExp | AxiomId::QProdExp | AxiomId::QProdOne
        )
    }

    pub fn schema(self) -> Schema {
        use Pat::*;
        let m = |s: &'static str| Meta(s);
        let sum = |a: Pat, b: Pat| Sum(Box::new(a), Box::new(b));
        let prod = |a: Pat, b: Pat| Prod(Box::new(a), Box::new(b));
        let pow = |a: Pat, b: Pat| Pow(Box::new(a), Box::new(b));
        let qsum = |b: Pat| QSum(BINDER, Box::new(b));
        let qprod = |b: Pat| QProd(BINDER, Box::new(b));
        let (lhs, rhs, fresh_for) = match self {
            AxiomId::AddComm => (sum(m(PHI), m(PSI)), sum(m(PSI), m(PHI)), None),
            AxiomId::AddAssoc => (
                sum(sum(m(PHI), m(PSI)), m(XI)),
                sum(m(PHI), sum(m(PSI), m(XI))),
                None,
            ),
            AxiomId::MulComm => (prod(m(PHI), m(PSI)), prod(m(PSI), m(PHI)), None),
            AxiomId::MulAssoc => (
                prod(prod(m(PHI), m(PSI)), m(XI)),
                prod(m(PHI), prod(m(PSI), m(XI))),
                None,
            ),
            AxiomId::Distrib => (
                prod(m(PHI), sum(m(PSI), m(XI))),
                sum(prod(m(PHI), m(PSI)), prod(m(PHI), m(XI))),
                None,
            ),
            AxiomId::MulOne => (prod(m(PHI), One), m(PHI), None),
            AxiomId::PowOne => (pow(m(PHI), One), m(PHI), None),
            AxiomId::OnePow => (pow(One, m(PHI)), One, None),
            AxiomId::PowAddExp => (
                pow(m(PHI), sum(m(PSI), m(XI))),
                prod(pow(m(PHI), m(PSI)), pow(m(PHI), m(XI))),
                None,
            ),
            AxiomId::PowMulBase => (
                pow(prod(m(PHI), m(PSI)), m(XI)),
                prod(pow(m(PHI), m(XI)), pow(m(PSI), m(XI))),
                None,
            ),
            AxiomId::PowPow => (
                pow(pow(m(PHI), m(PSI)), m(XI)),
                pow(m(PHI), prod(m(PSI), m(XI))),
                None,
            ),
            AxiomId::QProdMul => (
                qprod(prod(m(PHI), m(PSI))),
                prod(qprod(m(PHI)), qprod(m(PSI))),
                None,
            ),
            AxiomId::QSumAdd => (
                qsum(sum(m(PHI), m(PSI))),
                sum(qsum(m(PHI)), qsum(m(PSI))),
                None,
            ),
            AxiomId::QSumExp => (pow(m(PSI), qsum(m(PHI))), qprod(pow(m(PSI), m(PHI))), Some(PSI)),
            AxiomId::QProdExp => (pow(qprod(m(PHI)), m(PSI)), qprod(pow(m(PHI), m(PSI))), Some(PSI)),
            AxiomId::QProdOne => (qprod(One), One, None),
        };
        Schema { lhs, rhs, fresh_for }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub const PHI: &str = "phi";
pub const PSI: &str = "psi";
pub const XI: &str = "xi";
/// Binder metavariable; its substitution entry is a bare variable term.
pub const BINDER: &str = "x";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    LR,
    RL,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::LR => Direction::RL,
            Direction::RL => Direction::LR,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pat {
    Meta(&'static str),
    One,
    Sum(Box<Pat>, Box<Pat>),
    Prod(Box<Pat>, Box<Pat>),
    Pow(Box<Pat>, Box<Pat>),
    QSum(&'static str, Box<Pat>),
    QProd(&'static str, Box<Pat>),
}

/// Both sides of an axiom; `fresh_for` names the metavariable in which the
/// binder must not occur free.
#[derive(Debug, Clone)]
pub struct Schema {
    pub lhs: Pat,
    pub rhs: Pat,
    pub fresh_for: Option<&'static str>,
}

impl Schema {
    pub fn sides(&self, dir: Direction) -> (&Pat, &Pat) {
        match dir {
            Direction::LR => (&self.lhs, &self.rhs),
            Direction::RL => (&self.rhs, &self.lhs),
        }
    }
}

pub type Subst = BTreeMap<String, Term>;

/// One axiom instance applied at a position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub axiom: AxiomId,
    pub path: Path,
    pub dir: Direction,
    pub subst: Subst,
}

impl RewriteStep {
    pub fn reversed(&self) -> Self {
        RewriteStep {
            dir: self.dir.flip(),
            ..self.clone()
        }
    }

    pub fn under(&self, prefix: &Path) -> Self {
        RewriteStep {
            path: prefix.join(&self.path),
            ..self.clone()
        }
    }
}

fn binder_name(subst: &Subst, meta: &str) -> Option<String> {
    match subst.get(meta)? {
        Term::Var { name, args } if args.is_empty() => Some(name.clone()),
        _ => None,
    }
}

fn match_pat(p: &Pat, t: &Term, s: &mut Subst) -> bool {
    match (p, t) {
        (Pat::Meta(m), _) => match s.get(*m) {
            Some(bound) => bound.alpha_eq(t),
            None => {
                s.insert(m.to_string(), t.clone());
                true
            }
        },
        (Pat::One, Term::One) => true,
        (Pat::Sum(a, b), Term::Sum(x, y))
        | (Pat::Prod(a, b), Term::Prod(x, y))
        | (Pat::Pow(a, b), Term::Pow(x, y)) => match_pat(a, x, s) && match_pat(b, y, s),
        (Pat::QSum(v, body), Term::QSum(x, tb)) | (Pat::QProd(v, body), Term::QProd(x, tb)) => {
            match binder_name(s, v) {
                None => {
                    s.insert(v.to_string(), Term::var(x));
                    match_pat(body, tb, s)
                }
                Some(n) if &n == x => match_pat(body, tb, s),
                Some(n) => {
                    // Same binder under a different name: rename if that cannot capture.
                    if tb.free_vars().contains(&n) {
                        return false;
                    }
                    match_pat(body, &tb.subst_var(x, &n), s)
                }
            }
        }
        _ => false,
    }
}

fn instantiate(p: &Pat, s: &Subst) -> Option<Term> {
    Some(match p {
        Pat::Meta(m) => s.get(*m)?.clone(),
        Pat::One => Term::One,
        Pat::Sum(a, b) => Term::sum(instantiate(a, s)?, instantiate(b, s)?),
        Pat::Prod(a, b) => Term::prod(instantiate(a, s)?, instantiate(b, s)?),
        Pat::Pow(a, b) => Term::pow(instantiate(a, s)?, instantiate(b, s)?),
        Pat::QSum(v, b) => Term::QSum(binder_name(s, v)?, Box::new(instantiate(b, s)?)),
        Pat::QProd(v, b) => Term::QProd(binder_name(s, v)?, Box::new(instantiate(b, s)?)),
    })
}

fn pattern_metas(p: &Pat, out: &mut BTreeSet<&'static str>) {
    match p {
        Pat::Meta(m) => {
            out.insert(m);
        }
        Pat::One => {}
        Pat::Sum(a, b) | Pat::Prod(a, b) | Pat::Pow(a, b) => {
            pattern_metas(a, out);
            pattern_metas(b, out);
        }
        Pat::QSum(v, b) | Pat::QProd(v, b) => {
            out.insert(v);
            pattern_metas(b, out);
        }
    }
}

/// Metavariables of the target side that matching the source cannot bind
/// (e.g. `phi` when reading `1^phi = 1` right to left).
pub fn unbound_metas(axiom: AxiomId, dir: Direction) -> Vec<&'static str> {
    let schema = axiom.schema();
    let (src, dst) = schema.sides(dir);
    let mut have = BTreeSet::new();
    pattern_metas(src, &mut have);
    let mut need = BTreeSet::new();
    pattern_metas(dst, &mut need);
    need.difference(&have).copied().collect()
}

/// Matches the source side of `axiom` at `path`; `extra` supplies
/// metavariables that occur only on the target side.
pub fn match_step(t: &Term, axiom: AxiomId, dir: Direction, path: &Path, extra: &Subst) -> Option<RewriteStep> {
    let sub = t.at(path)?;
    let schema = axiom.schema();
    let (src, _) = schema.sides(dir);
    let mut s = Subst::new();
    if !match_pat(src, sub, &mut s) {
        return None;
    }
    for (k, v) in extra {
        s.entry(k.clone()).or_insert_with(|| v.clone());
    }
    let step = RewriteStep {
        axiom,
        path: path.clone(),
        dir,
        subst: s,
    };
    apply_axiom(t, &step).ok().map(|_| step)
}

/// Binder names on the way from the root to `path`.
fn context_binders(t: &Term, path: &Path) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = t;
    for &i in &path.0 {
        if let Term::QSum(x, _) | Term::QProd(x, _) = cur {
            out.push(x.clone());
        }
        match cur.children().get(i) {
            Some(c) => cur = c,
            None => break,
        }
    }
    out
}

/// Alpha-equivalence that may also rename free variables of `a` onto the
/// context binders `ctx` of `b`. Returns that renaming.
fn alpha_match_in_context(a: &Term, b: &Term, ctx: &[String]) -> Option<BTreeMap<String, String>> {
    fn go(
        a: &Term,
        b: &Term,
        env: &mut Vec<(String, String)>,
        ren: &mut BTreeMap<String, String>,
        ctx: &[String],
    ) -> bool {
        match (a, b) {
            (Term::Var { name: n1, args: a1 }, Term::Var { name: n2, args: a2 }) => {
                n1 == n2
                    && a1.len() == a2.len()
                    && a1.iter().zip(a2).all(|(x, y)| {
                        let bx = env.iter().rposition(|(l, _)| l == x);
                        let by = env.iter().rposition(|(_, r)| r == y);
                        match (bx, by) {
                            (Some(i), Some(j)) => i == j,
                            (None, None) => match ren.get(x) {
                                Some(z) => z == y,
                                None if x == y => {
                                    ren.insert(x.clone(), y.clone());
                                    true
                                }
                                None if ctx.contains(y) && !ren.values().any(|v| v == y) => {
                                    ren.insert(x.clone(), y.clone());
                                    true
                                }
                                None => false,
                            },
                            _ => false,
                        }
                    })
            }
            (Term::One, Term::One) => true,
            (Term::Sum(a1, a2), Term::Sum(b1, b2))
            | (Term::Prod(a1, a2), Term::Prod(b1, b2))
            | (Term::Pow(a1, a2), Term::Pow(b1, b2)) => {
                go(a1, b1, env, ren, ctx) && go(a2, b2, env, ren, ctx)
            }
            (Term::QSum(x, a), Term::QSum(y, b)) | (Term::QProd(x, a), Term::QProd(y, b)) => {
                env.push((x.clone(), y.clone()));
                let r = go(a, b, env, ren, ctx);
                env.pop();
                r
            }
            _ => false,
        }
    }
    let mut ren = BTreeMap::new();
    go(a, b, &mut Vec::new(), &mut ren, ctx).then_some(ren)
}

/// Simultaneous capture-avoiding renaming of free individual variables.
fn rename_free(t: &Term, ren: &BTreeMap<String, String>) -> Term {
    if ren.iter().all(|(k, v)| k == v) {
        return t.clone();
    }
    match t {
        Term::Var { name, args } => Term::Var {
            name: name.clone(),
            args: args.iter().map(|a| ren.get(a).cloned().unwrap_or_else(|| a.clone())).collect(),
        },
        Term::One => Term::One,
        Term::Sum(a, b) => Term::sum(rename_free(a, ren), rename_free(b, ren)),
        Term::Prod(a, b) => Term::prod(rename_free(a, ren), rename_free(b, ren)),
        Term::Pow(a, b) => Term::pow(rename_free(a, ren), rename_free(b, ren)),
        Term::QSum(x, b) | Term::QProd(x, b) => {
            let mut inner = ren.clone();
            inner.remove(x);
            let (x, body) = if inner.values().any(|v| v == x) {
                let mut used: BTreeSet<String> = inner.values().cloned().collect();
                used.extend(b.free_vars());
                used.insert(x.clone());
                let fresh = fresh_name(x, &used);
                (fresh.clone(), b.subst_var(x, &fresh))
            } else {
                (x.clone(), (**b).clone())
            };
            let body = Box::new(rename_free(&body, &inner));
            match t {
                Term::QSum(..) => Term::QSum(x, body),
                _ => Term::QProd(x, body),
            }
        }
    }
}

/// Applies one axiom instance. The instantiated source side must equal the
/// subterm at `step.path` up to renaming of bound variables.
pub fn apply_axiom(t: &Term, step: &RewriteStep) -> Result<Term> {
    let mut out = t.clone();
    rewrite_at(&mut out, step)?;
    Ok(out)
}

/// In-place form of [`apply_axiom`]; `t` is left untouched on error.
pub(crate) fn rewrite_at(t: &mut Term, step: &RewriteStep) -> Result<()> {
    let no_match = || Error::NoMatch {
        axiom: step.axiom,
        dir: step.dir,
        path: step.path.clone(),
    };
    let sub = t.at(&step.path).ok_or_else(|| Error::BadPath {
        path: step.path.clone(),
    })?;
    let schema = step.axiom.schema();
    let (src, dst) = schema.sides(step.dir);
    let lhs = instantiate(src, &step.subst).ok_or_else(no_match)?;
    let rhs = instantiate(dst, &step.subst).ok_or_else(no_match)?;
    if let Some(meta) = schema.fresh_for {
        let x = binder_name(&step.subst, BINDER).ok_or_else(no_match)?;
        let guarded = step.subst.get(meta).ok_or_else(no_match)?;
        if guarded.free_vars().contains(&x) {
            return Err(Error::SideCondition {
                axiom: step.axiom,
                path: step.path.clone(),
                var: x,
            });
        }
    }
    let replacement = if lhs == *sub {
        rhs
    } else {
        let ctx = context_binders(t, &step.path);
        let ren = alpha_match_in_context(&lhs, sub, &ctx).ok_or_else(no_match)?;
        rename_free(&rhs, &ren)
    };
    *t.at_mut(&step.path).expect("path checked above") = replacement;
    Ok(())
}

/// Both sides of the axiom instance described by `subst`, source first.
pub(crate) fn instantiate_sides(axiom: AxiomId, dir: Direction, subst: &Subst) -> Option<(Term, Term)> {
    let schema = axiom.schema();
    let (src, dst) = schema.sides(dir);
    Some((instantiate(src, subst)?, instantiate(dst, subst)?))
}

/// Matches the source side of `axiom` against `t` itself.
pub(crate) fn match_source(t: &Term, axiom: AxiomId, dir: Direction) -> Option<Subst> {
    let schema = axiom.schema();
    let mut s = Subst::new();
    match_pat(schema.sides(dir).0, t, &mut s).then_some(s)
}
