use serde_json::{json, Value};

use super::check::type_check;
use super::eval::{round_trip, RoundTrip};
use super::term::build::*;
use super::term::ProofTerm;
use crate::error::{Error, Result};
use crate::explog::replay_iso;
use crate::hsi::{instantiate_sides, match_source, AxiomId, Direction, RewriteStep, RewriteTrace, Subst, BINDER};
use crate::semantics::{Assignment, FinModel};
use crate::syntax::{from_term, print, term_path_to_formula, to_term, Formula, Path, SyntaxFlavor, Term};

/// Mutually inverse closed terms between two formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPair {
    pub source: Formula,
    pub target: Formula,
    pub fwd: ProofTerm,
    pub bwd: ProofTerm,
}

impl WitnessPair {
    pub fn identity(f: &Formula) -> Self {
        WitnessPair {
            source: f.clone(),
            target: f.clone(),
            fwd: id(),
            bwd: id(),
        }
    }

    pub fn inverse(&self) -> Self {
        WitnessPair {
            source: self.target.clone(),
            target: self.source.clone(),
            fwd: self.bwd.clone(),
            bwd: self.fwd.clone(),
        }
    }

    pub fn fwd_type(&self) -> Formula {
        Formula::implies(self.source.clone(), self.target.clone())
    }

    pub fn bwd_type(&self) -> Formula {
        Formula::implies(self.target.clone(), self.source.clone())
    }

    pub fn type_check(&self) -> Result<()> {
        type_check(&self.fwd, &self.fwd_type())?;
        type_check(&self.bwd, &self.bwd_type())
    }

    /// `fwd` as a term that can be applied.
    fn fwd_fn(&self) -> ProofTerm {
        ann(self.fwd.clone(), self.fwd_type())
    }

    fn bwd_fn(&self) -> ProofTerm {
        ann(self.bwd.clone(), self.bwd_type())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &WitnessPair) -> WitnessPair {
        WitnessPair {
            source: self.source.clone(),
            target: next.target.clone(),
            fwd: lam("x", app(next.fwd_fn(), app(self.fwd_fn(), var("x")))),
            bwd: lam("y", app(self.bwd_fn(), app(next.bwd_fn(), var("y")))),
        }
    }

    pub fn to_json(&self) -> Value {
        let show = |f: &Formula| print(f, SyntaxFlavor::Logical).expect("logical printing is total");
        json!({
            "source": show(&self.source),
            "target": show(&self.target),
            "fwd": self.fwd.to_string(),
            "bwd": self.bwd.to_string(),
        })
    }
}

fn pair_of(fwd: ProofTerm, bwd: ProofTerm, source: Formula, target: Formula) -> WitnessPair {
    WitnessPair {
        source,
        target,
        fwd,
        bwd,
    }
}

/// The canonical witness for one axiom instance, read in direction `dir`.
pub fn axiom_witness(ax: AxiomId, dir: Direction, subst: &Subst) -> Result<WitnessPair> {
    let (lhs, rhs) = instantiate_sides(ax, Direction::LR, subst)
        .ok_or_else(|| Error::Invalid(format!("substitution does not instantiate {ax}")))?;
    let (source, target) = (from_term(&lhs), from_term(&rhs));
    let x = match subst.get(BINDER) {
        Some(Term::Var { name, .. }) => name.clone(),
        _ => "x".to_string(),
    };
    let x = x.as_str();
    let (z, p, f, g) = (var("z"), var("p"), var("f"), var("g"));
    let swap = || lam("z", case(var("z"), "u", inr(var("u")), "v", inl(var("v"))));
    let (fwd, bwd) = match ax {
        AxiomId::AddComm => (swap(), swap()),
        AxiomId::AddAssoc => (
            lam(
                "z",
                case(
                    z.clone(),
                    "u",
                    case(var("u"), "a", inl(var("a")), "b", inr(inl(var("b")))),
                    "c",
                    inr(inr(var("c"))),
                ),
            ),
            lam(
                "z",
                case(
                    z,
                    "a",
                    inl(inl(var("a"))),
                    "w",
                    case(var("w"), "b", inl(inr(var("b"))), "c", inr(var("c"))),
                ),
            ),
        ),
        AxiomId::MulComm => (
            lam("p", pair(snd(p.clone()), fst(p.clone()))),
            lam("p", pair(snd(p.clone()), fst(p))),
        ),
        AxiomId::MulAssoc => (
            lam(
                "p",
                pair(fst(fst(p.clone())), pair(snd(fst(p.clone())), snd(p.clone()))),
            ),
            lam(
                "p",
                pair(pair(fst(p.clone()), fst(snd(p.clone()))), snd(snd(p))),
            ),
        ),
        AxiomId::Distrib => (
            lam(
                "p",
                case(
                    snd(p.clone()),
                    "b",
                    inl(pair(fst(p.clone()), var("b"))),
                    "c",
                    inr(pair(fst(p), var("c"))),
                ),
            ),
            lam(
                "z",
                case(
                    z,
                    "q",
                    pair(fst(var("q")), inl(snd(var("q")))),
                    "r",
                    pair(fst(var("r")), inr(snd(var("r")))),
                ),
            ),
        ),
        AxiomId::MulOne => (lam("p", fst(p)), lam("a", pair(var("a"), ProofTerm::Star))),
        AxiomId::PowOne => (lam("f", app(f, ProofTerm::Star)), lam("a", lam("u", var("a")))),
        AxiomId::OnePow => (lam("f", ProofTerm::Star), lam("u", lam("y", ProofTerm::Star))),
        AxiomId::PowAddExp => (
            lam(
                "f",
                pair(
                    lam("b", app(f.clone(), inl(var("b")))),
                    lam("c", app(f, inr(var("c")))),
                ),
            ),
            lam(
                "p",
                lam(
                    "z",
                    case(
                        z,
                        "b",
                        app(fst(p.clone()), var("b")),
                        "c",
                        app(snd(p), var("c")),
                    ),
                ),
            ),
        ),
        AxiomId::PowMulBase => (
            lam(
                "f",
                pair(
                    lam("c", fst(app(f.clone(), var("c")))),
                    lam("c", snd(app(f, var("c")))),
                ),
            ),
            lam(
                "p",
                lam("c", pair(app(fst(p.clone()), var("c")), app(snd(p), var("c")))),
            ),
        ),
        AxiomId::PowPow => (
            lam("f", lam("p", app(app(f, snd(p.clone())), fst(p)))),
            lam("g", lam("c", lam("b", app(g, pair(var("b"), var("c")))))),
        ),
        AxiomId::QProdMul => (
            lam(
                "f",
                pair(
                    dlam(x, fst(dapp(f.clone(), x))),
                    dlam(x, snd(dapp(f, x))),
                ),
            ),
            lam(
                "p",
                dlam(x, pair(dapp(fst(p.clone()), x), dapp(snd(p), x))),
            ),
        ),
        AxiomId::QSumAdd => (
            lam(
                "z",
                dsplit(
                    z.clone(),
                    x,
                    "u",
                    case(var("u"), "a", inl(dpair(x, var("a"))), "b", inr(dpair(x, var("b")))),
                ),
            ),
            lam(
                "z",
                case(
                    z,
                    "q",
                    dsplit(var("q"), x, "a", dpair(x, inl(var("a")))),
                    "r",
                    dsplit(var("r"), x, "b", dpair(x, inr(var("b")))),
                ),
            ),
        ),
        AxiomId::QSumExp => (
            lam("f", dlam(x, lam("a", app(f, dpair(x, var("a")))))),
            lam("g", lam("p", dsplit(p, x, "a", app(dapp(g, x), var("a"))))),
        ),
        AxiomId::QProdExp => (
            lam("f", dlam(x, lam("b", dapp(app(f, var("b")), x)))),
            lam("g", lam("b", dlam(x, app(dapp(g, x), var("b"))))),
        ),
        AxiomId::QProdOne => (lam("f", ProofTerm::Star), lam("u", dlam(x, ProofTerm::Star))),
    };
    let w = pair_of(fwd, bwd, source, target);
    w.type_check()?;
    Ok(match dir {
        Direction::LR => w,
        Direction::RL => w.inverse(),
    })
}

/// Lifts `w` to the position `path` of `context`, whose subformula there is
/// `w.source`.
pub fn lift_witness(w: &WitnessPair, context: &Formula, path: &Path) -> Result<WitnessPair> {
    lift(w, context, &path.0)
}

fn lift(w: &WitnessPair, ctx: &Formula, path: &[usize]) -> Result<WitnessPair> {
    let Some((&i, rest)) = path.split_first() else {
        if !ctx.alpha_eq(&w.source) {
            return Err(Error::Type("witness source does not match the hole".into()));
        }
        return Ok(WitnessPair {
            source: ctx.clone(),
            ..w.clone()
        });
    };
    let bad = || Error::BadPath {
        path: Path(path.to_vec()),
    };
    let child = ctx.children().get(i).copied().ok_or_else(bad)?.clone();
    let inner = lift(w, &child, rest)?;
    let (f, b) = (inner.fwd_fn(), inner.bwd_fn());
    let (p, z) = (var("p"), var("z"));
    let through = |m: &ProofTerm| -> ProofTerm {
        let m = || m.clone();
        match (ctx, i) {
            (Formula::And(..), 0) => lam("p", pair(app(m(), fst(p.clone())), snd(p.clone()))),
            (Formula::And(..), _) => lam("p", pair(fst(p.clone()), app(m(), snd(p.clone())))),
            (Formula::Or(..), 0) => lam("z", case(z.clone(), "u", inl(app(m(), var("u"))), "v", inr(var("v")))),
            (Formula::Or(..), _) => lam("z", case(z.clone(), "u", inl(var("u")), "v", inr(app(m(), var("v"))))),
            (Formula::Implies(..), _) => lam("f", lam("y", app(m(), app(var("f"), var("y"))))),
            (Formula::Forall(x, _), _) => lam("f", dlam(x, app(m(), dapp(var("f"), x)))),
            (Formula::Exists(x, _), _) => lam("p", dsplit(p.clone(), x, "u", dpair(x, app(m(), var("u"))))),
            _ => unreachable!("leaves have no children"),
        }
    };
    let rebuild = |new_child: &Formula| -> Formula {
        let mut out = ctx.clone();
        *out.at_mut(&Path(vec![i])).expect("child exists") = new_child.clone();
        out
    };
    let target = rebuild(&inner.target);
    let (fwd, bwd) = match (ctx, i) {
        // Contravariant in the antecedent: precompose with the other direction.
        (Formula::Implies(..), 0) => (
            lam("f", lam("y", app(var("f"), app(b, var("y"))))),
            lam("f", lam("y", app(var("f"), app(f, var("y"))))),
        ),
        _ => (through(&f), through(&b)),
    };
    Ok(pair_of(fwd, bwd, ctx.clone(), target))
}

/// Witness for one step applied to `cur` at a formula position; the second
/// component is the rewritten formula.
fn step_witness(cur: &Formula, step: &RewriteStep) -> Result<(WitnessPair, Formula)> {
    let next = replay_iso(cur, std::slice::from_ref(step))?;
    let bad = || Error::BadPath {
        path: step.path.clone(),
    };
    let sub = cur.at(&step.path).ok_or_else(bad)?;
    let mut subst = match_source(&to_term(sub), step.axiom, step.dir).ok_or_else(|| Error::NoMatch {
        axiom: step.axiom,
        dir: step.dir,
        path: step.path.clone(),
    })?;
    for (k, v) in &step.subst {
        subst.entry(k.clone()).or_insert_with(|| v.clone());
    }
    let mut w = axiom_witness(step.axiom, step.dir, &subst)?;
    let actual = next.at(&step.path).ok_or_else(bad)?;
    if !w.target.alpha_eq(actual) {
        return Err(Error::Type(format!("{} {} produced an unexpected target", step.axiom, step.dir)));
    }
    w.target = actual.clone();
    let lifted = lift_witness(&w, cur, &step.path)?;
    Ok((lifted, next))
}

/// Composes the witnesses of a trace whose step paths address formula positions.
pub fn compose_trace(start: &Formula, steps: &[RewriteStep]) -> Result<WitnessPair> {
    let mut cur = start.clone();
    let mut acc: Option<WitnessPair> = None;
    for (index, step) in steps.iter().enumerate() {
        let (w, next) = step_witness(&cur, step).map_err(|e| Error::StepMismatch {
            index,
            reason: e.to_string(),
        })?;
        acc = Some(match acc {
            None => w,
            Some(a) => a.then(&w),
        });
        cur = next;
    }
    let w = acc.unwrap_or_else(|| WitnessPair::identity(start));
    w.type_check()?;
    Ok(w)
}

/// [`compose_trace`] for a term-level trace of propositional terms.
pub fn compose_term_trace(trace: &RewriteTrace) -> Result<WitnessPair> {
    let mut t = trace.start.clone();
    let mut steps = Vec::with_capacity(trace.steps.len());
    for s in &trace.steps {
        let path = term_path_to_formula(&t, &s.path).ok_or_else(|| Error::BadPath { path: s.path.clone() })?;
        crate::hsi::apply_axiom(&t, s).map(|next| t = next)?;
        steps.push(RewriteStep { path, ..s.clone() });
    }
    compose_trace(&from_term(&trace.start), &steps)
}

/// Checks extensionally on `m` that the two terms are mutually inverse.
pub fn verify_roundtrip(w: &WitnessPair, m: &FinModel) -> Result<RoundTrip> {
    w.type_check()?;
    round_trip(&w.fwd, &w.bwd, &w.source, &w.target, m)
}

/// Largest denotation the extensional check enumerates in probe models.
pub const WITNESS_CAP: u64 = 5_000;

/// Models giving every atom of `f` (and of `g`) each size in `sizes`, and
/// every quantifier domain each size in `sizes`. Models are capped at
/// [`WITNESS_CAP`].
pub fn probe_models(formulas: &[&Formula], sizes: &[u64]) -> Vec<FinModel> {
    let mut names = std::collections::BTreeSet::new();
    let mut quantified = false;
    for f in formulas {
        names.extend(f.atom_names());
        quantified |= f.has_quantifiers();
    }
    let mut out = vec![Assignment::new()];
    for n in &names {
        out = out
            .into_iter()
            .flat_map(|a| sizes.iter().map(move |&s| a.clone().with(n, s)))
            .collect();
    }
    if quantified {
        out = out
            .into_iter()
            .flat_map(|a| sizes.iter().map(move |&s| a.clone().with_domain(s as u32)))
            .collect();
    }
    out.into_iter().map(|a| FinModel::new(a).with_cap(WITNESS_CAP)).collect()
}
