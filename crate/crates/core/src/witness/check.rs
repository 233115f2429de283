use super::term::ProofTerm;
use crate::error::{Error, Result};
use crate::syntax::{print, Formula, SyntaxFlavor};

/// Checks the closed term `t` against `ty`. Binder-introducing forms are
/// checked, eliminations inferred; redexes need an annotation.
pub fn type_check(t: &ProofTerm, ty: &Formula) -> Result<()> {
    Ctx::default().check(t, ty)
}

fn show(f: &Formula) -> String {
    print(f, SyntaxFlavor::Logical).expect("logical printing is total")
}

fn mismatch(t: &ProofTerm, want: &str, got: &Formula) -> Error {
    Error::Type(format!("`{t}` expects {want}, found `{}`", show(got)))
}

#[derive(Default, Clone)]
struct Ctx {
    vars: Vec<(String, Formula)>,
    doms: Vec<String>,
}

impl Ctx {
    fn with_var(&self, x: &str, ty: Formula) -> Ctx {
        let mut c = self.clone();
        c.vars.push((x.to_string(), ty));
        c
    }

    fn with_dom(&self, x: &str) -> Ctx {
        let mut c = self.clone();
        c.doms.push(x.to_string());
        c
    }

    fn dom(&self, x: &str) -> Result<()> {
        if self.doms.iter().any(|d| d == x) {
            Ok(())
        } else {
            Err(Error::Type(format!("domain variable `{x}` is not in scope")))
        }
    }

    fn check(&self, t: &ProofTerm, ty: &Formula) -> Result<()> {
        use ProofTerm::*;
        match (t, ty) {
            (Lam(x, b), Formula::Implies(a, c)) => self.with_var(x, (**a).clone()).check(b, c),
            (Pair(a, b), Formula::And(x, y)) => {
                self.check(a, x)?;
                self.check(b, y)
            }
            (Inl(a), Formula::Or(x, _)) => self.check(a, x),
            (Inr(b), Formula::Or(_, y)) => self.check(b, y),
            (Star, Formula::Top) => Ok(()),
            (DLam(y, b), Formula::Forall(x, body)) => self.with_dom(y).check(b, &body.subst_var(x, y)),
            (DPair(y, a), Formula::Exists(x, body)) => {
                self.dom(y)?;
                self.check(a, &body.subst_var(x, y))
            }
            (Case(s, x, l, y, r), _) => match self.infer(s)? {
                Formula::Or(a, b) => {
                    self.with_var(x, *a).check(l, ty)?;
                    self.with_var(y, *b).check(r, ty)
                }
                other => Err(mismatch(s, "a disjunction", &other)),
            },
            (DSplit(s, y, u, b), _) => match self.infer(s)? {
                Formula::Exists(x, body) => {
                    if ty.free_vars().contains(y) {
                        return Err(Error::Type(format!("`{y}` escapes its scope in `{t}`")));
                    }
                    self.with_dom(y).with_var(u, body.subst_var(&x, y)).check(b, ty)
                }
                other => Err(mismatch(s, "an existential", &other)),
            },
            (Lam(..) | Pair(..) | Inl(_) | Inr(_) | Star | DLam(..) | DPair(..), _) => {
                Err(Error::Type(format!("`{t}` cannot have type `{}`", show(ty))))
            }
            _ => {
                let got = self.infer(t)?;
                if got.alpha_eq(ty) {
                    Ok(())
                } else {
                    Err(Error::Type(format!(
                        "`{t}` has type `{}`, expected `{}`",
                        show(&got),
                        show(ty)
                    )))
                }
            }
        }
    }

    fn infer(&self, t: &ProofTerm) -> Result<Formula> {
        use ProofTerm::*;
        match t {
            Var(x) => self
                .vars
                .iter()
                .rev()
                .find(|(v, _)| v == x)
                .map(|(_, ty)| ty.clone())
                .ok_or_else(|| Error::Type(format!("unbound variable `{x}`"))),
            App(f, a) => match self.infer(f)? {
                Formula::Implies(x, y) => {
                    self.check(a, &x)?;
                    Ok(*y)
                }
                other => Err(mismatch(f, "an implication", &other)),
            },
            Fst(p) | Snd(p) => match self.infer(p)? {
                Formula::And(a, b) => Ok(if matches!(t, Fst(_)) { *a } else { *b }),
                other => Err(mismatch(p, "a conjunction", &other)),
            },
            DApp(f, y) => {
                self.dom(y)?;
                match self.infer(f)? {
                    Formula::Forall(x, body) => Ok(body.subst_var(&x, y)),
                    other => Err(mismatch(f, "a universal", &other)),
                }
            }
            Ann(a, ty) => {
                self.check(a, ty)?;
                Ok(ty.clone())
            }
            _ => Err(Error::Type(format!("cannot infer a type for `{t}` without an annotation"))),
        }
    }
}
