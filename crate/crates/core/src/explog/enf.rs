use crate::error::{Error, Result};
use crate::hsi::{apply_axiom, match_step, AxiomId, Direction, RewriteStep, Subst, DEFAULT_NODE_CAP};
use crate::syntax::{from_term, rename_apart, term_path_to_formula, to_term, Formula, Path, Term};

use AxiomId::*;
use Direction::{LR, RL};

/// An exp-log normal form together with the isomorphism steps leading to it.
/// Step paths address formula positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnfResult {
    /// The input after renaming apart; the trace starts here.
    pub start: Formula,
    pub normal: Formula,
    pub iso_trace: Vec<RewriteStep>,
}

/// Normalizes `f` into the Π/Σ grammar using only axiom instances.
pub fn enf(f: &Formula) -> Result<EnfResult> {
    enf_capped(f, DEFAULT_NODE_CAP)
}

pub fn enf_capped(f: &Formula, cap: usize) -> Result<EnfResult> {
    let start = rename_apart(f);
    let mut n = Norm {
        term: to_term(&start),
        steps: Vec::new(),
        cap,
    };
    let root = Path::root();
    match n.term {
        Term::Var { .. } | Term::Sum(..) | Term::QSum(..) => n.sigma(&root)?,
        _ => n.pi(&root)?,
    }
    Ok(EnfResult {
        start,
        normal: from_term(&n.term),
        iso_trace: n.steps,
    })
}

/// Replays formula-position steps from `f`.
pub fn replay_iso(f: &Formula, steps: &[RewriteStep]) -> Result<Formula> {
    let mut t = to_term(f);
    for (index, step) in steps.iter().enumerate() {
        let mismatch = |reason: String| Error::StepMismatch { index, reason };
        let tp = term_path_of(&t, &step.path).ok_or_else(|| mismatch(format!("no position {}", step.path)))?;
        let s = RewriteStep {
            path: tp,
            ..step.clone()
        };
        t = apply_axiom(&t, &s).map_err(|e| mismatch(e.to_string()))?;
    }
    Ok(from_term(&t))
}

/// Formula position `fp` as a position in the term reading of the formula.
pub(crate) fn term_path_of(t: &Term, fp: &Path) -> Option<Path> {
    let mut cur = t;
    let mut out = Vec::with_capacity(fp.0.len());
    for &i in &fp.0 {
        let j = match cur {
            Term::Pow(..) if i < 2 => 1 - i,
            _ => i,
        };
        cur = *cur.children().get(j)?;
        out.push(j);
    }
    Some(Path(out))
}

struct Norm {
    term: Term,
    steps: Vec<RewriteStep>,
    cap: usize,
}

impl Norm {
    fn at(&self, p: &Path) -> &Term {
        self.term.at(p).expect("positions stay inside the term")
    }

    fn apply(&mut self, p: &Path, axiom: AxiomId, dir: Direction) -> Result<()> {
        let step = match_step(&self.term, axiom, dir, p, &Subst::new()).ok_or_else(|| {
            Error::Invalid(format!("exp-log normalization: {axiom} {dir} does not apply at {p}"))
        })?;
        self.term = apply_axiom(&self.term, &step)?;
        let fp = term_path_to_formula(&self.term, p).expect("position exists");
        self.steps.push(RewriteStep { path: fp, ..step });
        if self.term.size() > self.cap {
            return Err(Error::SizeGuard {
                cap: self.cap,
                partial: std::mem::take(&mut self.steps),
            });
        }
        Ok(())
    }

    /// Concatenates two Π-forms into one right-nested conjunction.
    fn conj_merge(&mut self, p: &Path) -> Result<()> {
        if let Term::Prod(a, b) = self.at(p) {
            if **a == Term::One {
                self.apply(p, MulComm, LR)?;
                return self.apply(p, MulOne, LR);
            }
            if **b == Term::One {
                return self.apply(p, MulOne, LR);
            }
        }
        let mut q = p.clone();
        loop {
            match self.at(&q) {
                Term::Prod(a, _) if matches!(**a, Term::Prod(..)) => self.apply(&q, MulAssoc, LR)?,
                Term::Prod(..) => q = q.child(1),
                _ => return Ok(()),
            }
        }
    }

    fn pi(&mut self, p: &Path) -> Result<()> {
        match self.at(p) {
            Term::One => Ok(()),
            Term::Var { .. } => self.apply(p, PowOne, RL),
            Term::Sum(..) | Term::QSum(..) => {
                self.sigma(p)?;
                self.apply(p, PowOne, RL)
            }
            Term::Prod(..) => {
                self.pi(&p.child(0))?;
                self.pi(&p.child(1))?;
                self.conj_merge(p)
            }
            Term::QProd(..) => {
                self.pi(&p.child(0))?;
                let mut q = p.clone();
                loop {
                    match self.at(&q.child(0)) {
                        Term::One => return self.apply(&q, QProdOne, LR),
                        Term::Prod(..) => {
                            self.apply(&q, QProdMul, LR)?;
                            q = q.child(1);
                        }
                        _ => return Ok(()),
                    }
                }
            }
            Term::Pow(cons, ante) => {
                let cons = (**cons).clone();
                let ante = (**ante).clone();
                match cons {
                    Term::Prod(..) => {
                        self.apply(p, PowMulBase, LR)?;
                        self.pi(&p.child(0))?;
                        self.pi(&p.child(1))?;
                        return self.conj_merge(p);
                    }
                    Term::Pow(..) => {
                        self.apply(p, PowPow, LR)?;
                        self.apply(&p.child(1), MulComm, LR)?;
                        return self.pi(p);
                    }
                    Term::QProd(..) => {
                        self.apply(p, QProdExp, LR)?;
                        return self.pi(p);
                    }
                    Term::One => return self.apply(p, OnePow, LR),
                    _ => {}
                }
                match ante {
                    Term::Sum(..) => {
                        self.apply(p, PowAddExp, LR)?;
                        self.pi(&p.child(0))?;
                        self.pi(&p.child(1))?;
                        self.conj_merge(p)
                    }
                    Term::QSum(..) => {
                        self.apply(p, QSumExp, LR)?;
                        self.pi(p)
                    }
                    _ => {
                        self.pi(&p.child(1))?;
                        self.sigma(&p.child(0))
                    }
                }
            }
        }
    }

    fn sigma(&mut self, p: &Path) -> Result<()> {
        match self.at(p) {
            Term::Var { .. } => Ok(()),
            Term::Sum(..) => {
                let mut q = p.clone();
                loop {
                    match self.at(&q) {
                        Term::Sum(a, _) if matches!(**a, Term::Sum(..)) => self.apply(&q, AddAssoc, LR)?,
                        Term::Sum(..) => {
                            self.pi(&q.child(0))?;
                            q = q.child(1);
                        }
                        _ => return self.pi(&q),
                    }
                }
            }
            Term::QSum(..) => {
                if !matches!(self.at(&p.child(0)), Term::Sum(..)) {
                    return self.pi(&p.child(0));
                }
                let mut q = p.clone();
                loop {
                    match self.at(&q.child(0)) {
                        Term::Sum(a, _) if matches!(**a, Term::Sum(..)) => self.apply(&q.child(0), AddAssoc, LR)?,
                        Term::Sum(..) => {
                            self.apply(&q, QSumAdd, LR)?;
                            q = q.child(1);
                        }
                        _ => break,
                    }
                }
                self.sigma(p)
            }
            _ => Err(Error::Invalid("exp-log normalization: Σ expected".into())),
        }
    }
}
