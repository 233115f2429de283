use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use super::axiom::{match_source, rewrite_at, AxiomId, Direction, RewriteStep};
use super::trace::RewriteTrace;
use crate::error::{Error, Result};
use crate::syntax::{fresh_name, is_renamed_apart, rename_apart_term, Path, Term};

use AxiomId::*;
use Direction::{LR, RL};

/// Default node cap for [`normal_form`].
pub const DEFAULT_NODE_CAP: usize = 100_000;

/// Argument of a prime term. Bound arguments are de Bruijn indices, so the
/// representation does not depend on binder names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arg {
    Bound(u32),
    Free(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QuantKind {
    Sum,
    Prod,
}

/// Factor base. The declaration order is the canonical order:
/// numerals, variables, quantified terms, composite sums.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    /// Prime in a normal form; any numeral while reading intermediate terms.
    Numeral(u64),
    Var { name: String, args: Vec<Arg> },
    /// Opaque at the enclosing level.
    Quant { kind: QuantKind, body: Box<NormalTerm> },
    /// At least two monomials, no common content.
    Sum(Box<NormalTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub base: Base,
    /// The empty monomial stands for the exponent 1.
    pub exponent: Monomial,
}

/// Sorted factors with multiplicities. A multiplicity `k` on `b^m` is the
/// exponent coefficient: `b^m · b^m = b^{2m}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub factors: Vec<(Factor, u64)>,
}

/// Sorted monomials with their coefficients.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalTerm {
    pub monomials: Vec<(Monomial, u64)>,
}

fn group<T: Ord>(mut items: Vec<T>) -> Vec<(T, u64)> {
    items.sort();
    let mut out: Vec<(T, u64)> = Vec::new();
    for it in items {
        match out.last_mut() {
            Some((last, n)) if *last == it => *n += 1,
            _ => out.push((it, 1)),
        }
    }
    out
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    fn degree(&self) -> u64 {
        self.factors.iter().map(|(_, k)| k).sum()
    }
}

impl NormalTerm {
    /// Reads a term in canonical shape. Total on all terms, but only
    /// meaningful as a normal form for the output of [`normal_form`].
    pub fn of_term(t: &Term) -> NormalTerm {
        reflect_sum(t, &mut Vec::new())
    }

    /// The canonical term, with fresh names for binders.
    pub fn to_term(&self) -> Term {
        let mut avoid = BTreeSet::new();
        self.free_names(&mut avoid);
        reify_sum(self, &mut Vec::new(), &avoid)
    }

    fn free_names(&self, out: &mut BTreeSet<String>) {
        for (m, _) in &self.monomials {
            m.free_names(out);
        }
    }
}

impl Monomial {
    fn free_names(&self, out: &mut BTreeSet<String>) {
        for (f, _) in &self.factors {
            f.exponent.free_names(out);
            match &f.base {
                Base::Numeral(_) => {}
                Base::Var { args, .. } => {
                    for a in args {
                        if let Arg::Free(n) = a {
                            out.insert(n.clone());
                        }
                    }
                }
                Base::Quant { body, .. } | Base::Sum(body) => body.free_names(out),
            }
        }
    }
}

// ---- reading terms --------------------------------------------------------

fn collect<'a>(t: &'a Term, sum: bool, out: &mut Vec<&'a Term>) {
    match t {
        Term::Sum(a, b) if sum => {
            collect(a, sum, out);
            collect(b, sum, out);
        }
        Term::Prod(a, b) if !sum => {
            collect(a, sum, out);
            collect(b, sum, out);
        }
        _ => out.push(t),
    }
}

pub(crate) fn reflect_sum(t: &Term, ctx: &mut Vec<String>) -> NormalTerm {
    let mut items = Vec::new();
    collect(t, true, &mut items);
    NormalTerm {
        monomials: group(items.into_iter().map(|m| reflect_mono(m, ctx)).collect()),
    }
}

pub(crate) fn reflect_mono(t: &Term, ctx: &mut Vec<String>) -> Monomial {
    let mut items = Vec::new();
    collect(t, false, &mut items);
    Monomial {
        factors: group(
            items
                .into_iter()
                .filter(|f| !matches!(f, Term::One))
                .map(|f| reflect_factor(f, ctx))
                .collect(),
        ),
    }
}

pub(crate) fn reflect_factor(t: &Term, ctx: &mut Vec<String>) -> Factor {
    match t {
        Term::Pow(b, e) => Factor {
            base: reflect_base(b, ctx),
            exponent: reflect_mono(e, ctx),
        },
        _ => Factor {
            base: reflect_base(t, ctx),
            exponent: Monomial::one(),
        },
    }
}

fn reflect_base(t: &Term, ctx: &mut Vec<String>) -> Base {
    match t {
        Term::Var { name, args } => Base::Var {
            name: name.clone(),
            args: args
                .iter()
                .map(|a| match ctx.iter().rposition(|c| c == a) {
                    Some(i) => Arg::Bound((ctx.len() - 1 - i) as u32),
                    None => Arg::Free(a.clone()),
                })
                .collect(),
        },
        Term::QSum(x, b) | Term::QProd(x, b) => {
            ctx.push(x.clone());
            let body = reflect_sum(b, ctx);
            ctx.pop();
            let kind = if matches!(t, Term::QSum(..)) {
                QuantKind::Sum
            } else {
                QuantKind::Prod
            };
            Base::Quant {
                kind,
                body: Box::new(body),
            }
        }
        _ => {
            let s = reflect_sum(t, ctx);
            match s.monomials.as_slice() {
                [(m, k)] if m.is_one() => Base::Numeral(*k),
                _ => Base::Sum(Box::new(s)),
            }
        }
    }
}

// ---- building terms -------------------------------------------------------

fn chain(items: Vec<Term>, join: fn(Term, Term) -> Term, unit: Term) -> Term {
    let mut it = items.into_iter().rev();
    match it.next() {
        None => unit,
        Some(last) => it.fold(last, |acc, t| join(t, acc)),
    }
}

fn reify_sum(s: &NormalTerm, ctx: &mut Vec<String>, avoid: &BTreeSet<String>) -> Term {
    let mut items = Vec::new();
    for (m, k) in &s.monomials {
        let t = reify_mono(m, ctx, avoid);
        for _ in 0..*k {
            items.push(t.clone());
        }
    }
    chain(items, Term::sum, Term::One)
}

fn reify_mono(m: &Monomial, ctx: &mut Vec<String>, avoid: &BTreeSet<String>) -> Term {
    let mut items = Vec::new();
    for (f, k) in &m.factors {
        let t = reify_factor(f, ctx, avoid);
        for _ in 0..*k {
            items.push(t.clone());
        }
    }
    chain(items, Term::prod, Term::One)
}

fn reify_factor(f: &Factor, ctx: &mut Vec<String>, avoid: &BTreeSet<String>) -> Term {
    let b = reify_base(&f.base, ctx, avoid);
    if f.exponent.is_one() {
        b
    } else {
        Term::pow(b, reify_mono(&f.exponent, ctx, avoid))
    }
}

fn reify_base(b: &Base, ctx: &mut Vec<String>, avoid: &BTreeSet<String>) -> Term {
    match b {
        Base::Numeral(k) => Term::numeral(*k as usize),
        Base::Var { name, args } => Term::Var {
            name: name.clone(),
            args: args
                .iter()
                .map(|a| match a {
                    Arg::Bound(i) => ctx[ctx.len() - 1 - *i as usize].clone(),
                    Arg::Free(n) => n.clone(),
                })
                .collect(),
        },
        Base::Quant { kind, body } => {
            let mut used = avoid.clone();
            used.extend(ctx.iter().cloned());
            body.free_names(&mut used);
            let x = fresh_name("x", &used);
            ctx.push(x.clone());
            let inner = reify_sum(body, ctx, avoid);
            ctx.pop();
            match kind {
                QuantKind::Sum => Term::QSum(x, Box::new(inner)),
                QuantKind::Prod => Term::QProd(x, Box::new(inner)),
            }
        }
        Base::Sum(s) => reify_sum(s, ctx, avoid),
    }
}

// ---- the strategy ---------------------------------------------------------

fn smallest_prime_factor(k: u64) -> u64 {
    let mut d = 2;
    while d * d <= k {
        if k.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    k
}

fn internal(what: &str) -> Error {
    Error::Invalid(format!("normalization invariant broken: {what}"))
}

fn arg_names(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var { args, .. } => out.extend(args.iter().cloned()),
        Term::One => {}
        Term::Sum(a, b) | Term::Prod(a, b) | Term::Pow(a, b) => {
            arg_names(a, out);
            arg_names(b, out);
        }
        Term::QSum(x, b) | Term::QProd(x, b) => {
            out.insert(x.clone());
            arg_names(b, out);
        }
    }
}

/// A term under rewriting together with the steps taken so far.
struct Rw<'a> {
    term: Term,
    steps: Vec<RewriteStep>,
    /// Binders enclosing the root of `term` (for scratch terms).
    ctx0: Vec<String>,
    avoid: &'a BTreeSet<String>,
    cap: usize,
    size: usize,
}

impl<'a> Rw<'a> {
    fn new(term: Term, ctx0: Vec<String>, avoid: &'a BTreeSet<String>, cap: usize) -> Self {
        let size = term.size();
        Rw {
            term,
            steps: Vec::new(),
            ctx0,
            avoid,
            cap,
            size,
        }
    }

    fn at(&self, p: &Path) -> &Term {
        self.term.at(p).expect("strategy paths stay inside the term")
    }

    fn ctx_at(&self, p: &Path) -> Vec<String> {
        let mut ctx = self.ctx0.clone();
        let mut cur = &self.term;
        for &i in &p.0 {
            if let Term::QSum(x, _) | Term::QProd(x, _) = cur {
                ctx.push(x.clone());
            }
            cur = cur.children()[i];
        }
        ctx
    }

    fn mono_key(&self, p: &Path) -> Monomial {
        reflect_mono(self.at(p), &mut self.ctx_at(p))
    }

    fn factor_key(&self, p: &Path) -> Factor {
        reflect_factor(self.at(p), &mut self.ctx_at(p))
    }

    fn sum_key(&self, p: &Path) -> NormalTerm {
        reflect_sum(self.at(p), &mut self.ctx_at(p))
    }

    fn push(&mut self, step: RewriteStep) -> Result<()> {
        let before = self.term.at(&step.path).map(Term::size).unwrap_or(0);
        rewrite_at(&mut self.term, &step)?;
        let after = self.at(&step.path).size();
        self.size = self.size + after - before;
        self.steps.push(step);
        if self.size > self.cap || self.steps.len() > self.cap.saturating_mul(50) {
            return Err(Error::SizeGuard {
                cap: self.cap,
                partial: std::mem::take(&mut self.steps),
            });
        }
        Ok(())
    }

    fn apply(&mut self, p: &Path, axiom: AxiomId, dir: Direction) -> Result<()> {
        let subst = match_source(self.at(p), axiom, dir).ok_or_else(|| internal(&format!("{axiom} {dir} at {p}")))?;
        self.push(RewriteStep {
            axiom,
            path: p.clone(),
            dir,
            subst,
        })
    }

    /// Rewrites the canonical subterm at `p` into `target` by normalizing
    /// `target` separately and replaying those steps backwards.
    fn rewrite_to(&mut self, p: &Path, target: Term) -> Result<()> {
        let ctx = self.ctx_at(p);
        let mut scratch = Rw::new(target, ctx.clone(), self.avoid, self.cap);
        match scratch.norm(&Path::root()) {
            Ok(()) => {}
            Err(Error::SizeGuard { cap, .. }) => {
                return Err(Error::SizeGuard {
                    cap,
                    partial: std::mem::take(&mut self.steps),
                })
            }
            Err(e) => return Err(e),
        }
        if reflect_sum(&scratch.term, &mut ctx.clone()) != self.sum_key(p) {
            return Err(internal("factorization target does not normalize back"));
        }
        for step in scratch.steps.iter().rev() {
            self.push(step.reversed().under(p))?;
        }
        Ok(())
    }

    fn norm(&mut self, p: &Path) -> Result<()> {
        match self.at(p) {
            Term::Var { .. } | Term::One => Ok(()),
            Term::Sum(..) => {
                self.norm(&p.child(0))?;
                self.norm(&p.child(1))?;
                self.merge_sum(p)
            }
            Term::Prod(..) => {
                self.norm(&p.child(0))?;
                self.norm(&p.child(1))?;
                self.mul_sums(p)
            }
            Term::Pow(..) => {
                self.norm(&p.child(0))?;
                self.norm(&p.child(1))?;
                self.pow_canon(p)
            }
            Term::QSum(..) => {
                self.norm(&p.child(0))?;
                self.qsum_canon(p)
            }
            Term::QProd(..) => {
                self.norm(&p.child(0))?;
                self.qprod_canon(p)
            }
        }
    }

    /// `A + B` with both sides canonical sums.
    fn merge_sum(&mut self, p: &Path) -> Result<()> {
        let mut q = p.clone();
        let mut k = 1;
        while matches!(self.at(&q), Term::Sum(a, _) if matches!(**a, Term::Sum(..))) {
            self.apply(&q, AddAssoc, LR)?;
            q = q.child(1);
            k += 1;
        }
        for i in (0..k).rev() {
            let mut r = p.clone();
            for _ in 0..i {
                r = r.child(1);
            }
            self.insert_sum(r)?;
        }
        Ok(())
    }

    /// `a + L` with `L` sorted: moves `a` into place.
    fn insert_sum(&mut self, mut r: Path) -> Result<()> {
        loop {
            let a = self.mono_key(&r.child(0));
            let rest = r.child(1);
            if let Term::Sum(..) = self.at(&rest) {
                if a <= self.mono_key(&rest.child(0)) {
                    return Ok(());
                }
                self.apply(&r, AddAssoc, RL)?;
                self.apply(&r.child(0), AddComm, LR)?;
                self.apply(&r, AddAssoc, LR)?;
                r = rest;
            } else {
                if a > self.mono_key(&rest) {
                    self.apply(&r, AddComm, LR)?;
                }
                return Ok(());
            }
        }
    }

    /// `A · B` with both sides canonical monomials.
    fn mul_monos(&mut self, p: &Path) -> Result<()> {
        if let Term::Prod(a, b) = self.at(p) {
            if matches!(**a, Term::One) {
                self.apply(p, MulComm, LR)?;
                return self.apply(p, MulOne, LR);
            }
            if matches!(**b, Term::One) {
                return self.apply(p, MulOne, LR);
            }
        }
        let mut q = p.clone();
        let mut k = 1;
        while matches!(self.at(&q), Term::Prod(a, _) if matches!(**a, Term::Prod(..))) {
            self.apply(&q, MulAssoc, LR)?;
            q = q.child(1);
            k += 1;
        }
        for i in (0..k).rev() {
            let mut r = p.clone();
            for _ in 0..i {
                r = r.child(1);
            }
            self.insert_mono(r)?;
        }
        Ok(())
    }

    fn insert_mono(&mut self, mut r: Path) -> Result<()> {
        loop {
            let a = self.factor_key(&r.child(0));
            let rest = r.child(1);
            if let Term::Prod(..) = self.at(&rest) {
                if a <= self.factor_key(&rest.child(0)) {
                    return Ok(());
                }
                self.apply(&r, MulAssoc, RL)?;
                self.apply(&r.child(0), MulComm, LR)?;
                self.apply(&r, MulAssoc, LR)?;
                r = rest;
            } else {
                if a > self.factor_key(&rest) {
                    self.apply(&r, MulComm, LR)?;
                }
                return Ok(());
            }
        }
    }

    /// `A · B` with both sides canonical sums.
    fn mul_sums(&mut self, p: &Path) -> Result<()> {
        let (a_sum, b_sum) = match self.at(p) {
            Term::Prod(a, b) => (matches!(**a, Term::Sum(..)), matches!(**b, Term::Sum(..))),
            _ => return Err(internal("product expected")),
        };
        if a_sum {
            self.apply(p, MulComm, LR)?;
            self.apply(p, Distrib, LR)?;
            self.apply(&p.child(0), MulComm, LR)?;
            self.mul_sums(&p.child(0))?;
            self.apply(&p.child(1), MulComm, LR)?;
            self.mul_sums(&p.child(1))?;
            self.merge_sum(p)
        } else if b_sum {
            self.apply(p, Distrib, LR)?;
            self.mul_monos(&p.child(0))?;
            self.mul_sums(&p.child(1))?;
            self.merge_sum(p)
        } else {
            self.mul_monos(p)
        }
    }

    /// Splits `P^m` into `P0^m · P1^m` after rewriting the base to `P0 · P1`.
    fn split_base(&mut self, p: &Path, target: Option<Term>) -> Result<()> {
        if let Some(t) = target {
            self.rewrite_to(&p.child(0), t)?;
        }
        self.apply(p, PowMulBase, LR)?;
        self.pow_canon(&p.child(0))?;
        self.pow_canon(&p.child(1))?;
        self.mul_monos(p)
    }

    /// `B^E` with both sides canonical sums.
    fn pow_canon(&mut self, p: &Path) -> Result<()> {
        let (base, exp) = match self.at(p) {
            Term::Pow(b, e) => ((**b).clone(), (**e).clone()),
            _ => return Err(internal("power expected")),
        };
        if let Term::Sum(..) = exp {
            self.apply(p, PowAddExp, LR)?;
            self.pow_canon(&p.child(0))?;
            self.pow_canon(&p.child(1))?;
            return self.mul_sums(p);
        }
        if exp == Term::One {
            return self.apply(p, PowOne, LR);
        }
        match base {
            Term::One => self.apply(p, OnePow, LR),
            Term::Pow(..) => {
                self.apply(p, PowPow, LR)?;
                self.mul_monos(&p.child(1))?;
                self.pow_canon(p)
            }
            Term::Prod(..) => self.split_base(p, None),
            Term::Sum(..) => {
                let nb = self.sum_key(&p.child(0));
                let mut ctx = self.ctx_at(&p.child(0));
                if let [(m, k)] = nb.monomials.as_slice() {
                    let target = if m.is_one() {
                        let q = smallest_prime_factor(*k);
                        if q == *k {
                            return self.finish_pow(p);
                        }
                        Term::prod(Term::numeral(q as usize), Term::numeral((*k / q) as usize))
                    } else {
                        Term::prod(Term::numeral(*k as usize), reify_mono(m, &mut ctx, self.avoid))
                    };
                    return self.split_base(p, Some(target));
                }
                let g = nb.monomials.iter().fold(0u64, |g, (_, k)| g.gcd(k));
                let content = content_of(&nb);
                if g == 1 && content.is_one() {
                    return self.finish_pow(p);
                }
                let mut monomials: Vec<(Monomial, u64)> =
                    nb.monomials.iter().map(|(m, k)| (divide(m, &content), k / g)).collect();
                monomials.sort();
                let primitive = NormalTerm { monomials };
                let lead = NormalTerm {
                    monomials: vec![(content, g)],
                };
                let target = Term::prod(
                    reify_sum(&lead, &mut ctx, self.avoid),
                    reify_sum(&primitive, &mut ctx, self.avoid),
                );
                self.split_base(p, Some(target))
            }
            _ => self.finish_pow(p),
        }
    }

    /// `b^m` with `b` a variable, prime, primitive sum or quantified term and
    /// `m` a canonical monomial other than 1: pushes quantifiers outwards.
    fn finish_pow(&mut self, p: &Path) -> Result<()> {
        let exp_path = p.child(1);
        let mut factors = Vec::new();
        collect(self.at(&exp_path), false, &mut factors);
        let base_free = self.at(&p.child(0)).free_vars();
        let sigma = (0..factors.len()).find(|&i| match factors[i] {
            Term::QSum(x, _) => {
                !base_free.contains(x)
                    && factors
                        .iter()
                        .enumerate()
                        .all(|(j, f)| j == i || !f.free_vars().contains(x))
            }
            _ => false,
        });
        if let Some(i) = sigma {
            if factors.len() > 1 {
                let q = factors[i].clone();
                let rest: Vec<Term> = factors
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, f)| (*f).clone())
                    .collect();
                let target = Term::prod(chain(rest, Term::prod, Term::One), q);
                self.rewrite_to(&exp_path, target)?;
                self.apply(p, PowPow, RL)?;
                self.pow_canon(&p.child(0))?;
            }
            self.apply(p, QSumExp, LR)?;
            self.pow_canon(&p.child(0))?;
            return self.qprod_canon(p);
        }
        if let Term::QProd(x, _) = self.at(&p.child(0)) {
            if !self.at(&exp_path).free_vars().contains(x) {
                self.apply(p, QProdExp, LR)?;
                self.pow_canon(&p.child(0))?;
                return self.qprod_canon(p);
            }
        }
        Ok(())
    }

    fn qsum_canon(&mut self, p: &Path) -> Result<()> {
        if let Term::Sum(..) = self.at(&p.child(0)) {
            self.apply(p, QSumAdd, LR)?;
            self.qsum_canon(&p.child(1))?;
            self.merge_sum(p)?;
        }
        Ok(())
    }

    fn qprod_canon(&mut self, p: &Path) -> Result<()> {
        match self.at(&p.child(0)) {
            Term::One => self.apply(p, QProdOne, LR),
            Term::Prod(..) => {
                self.apply(p, QProdMul, LR)?;
                self.qprod_canon(&p.child(0))?;
                self.qprod_canon(&p.child(1))?;
                self.mul_monos(p)
            }
            _ => Ok(()),
        }
    }
}

/// Factors common to every monomial, with their least multiplicity.
fn content_of(s: &NormalTerm) -> Monomial {
    let mut iter = s.monomials.iter();
    let mut common = match iter.next() {
        Some((m, _)) => m.factors.clone(),
        None => return Monomial::one(),
    };
    for (m, _) in iter {
        common = common
            .into_iter()
            .filter_map(|(f, k)| {
                m.factors
                    .iter()
                    .find(|(g, _)| *g == f)
                    .map(|(_, j)| (f, k.min(*j)))
            })
            .collect();
    }
    Monomial { factors: common }
}

fn divide(m: &Monomial, by: &Monomial) -> Monomial {
    Monomial {
        factors: m
            .factors
            .iter()
            .filter_map(|(f, k)| {
                let j = by.factors.iter().find(|(g, _)| g == f).map_or(0, |(_, j)| *j);
                (*k > j).then(|| (f.clone(), k - j))
            })
            .collect(),
    }
}

/// Normal form and derivation, with the default node cap.
pub fn normal_form(t: &Term) -> Result<(NormalTerm, RewriteTrace)> {
    normal_form_capped(t, DEFAULT_NODE_CAP)
}

/// Normalizes `t`. Terms that are not renamed apart are renamed first and the
/// trace starts from the renamed term.
pub fn normal_form_capped(t: &Term, cap: usize) -> Result<(NormalTerm, RewriteTrace)> {
    let start = if is_renamed_apart(t) {
        t.clone()
    } else {
        rename_apart_term(t)
    };
    let mut avoid = BTreeSet::new();
    arg_names(&start, &mut avoid);
    let mut rw = Rw::new(start.clone(), Vec::new(), &avoid, cap);
    rw.norm(&Path::root())?;
    let nf = NormalTerm::of_term(&rw.term);
    Ok((
        nf,
        RewriteTrace {
            start,
            steps: rw.steps,
            end: rw.term,
        },
    ))
}

// ---- display --------------------------------------------------------------

impl fmt::Display for NormalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut avoid = BTreeSet::new();
        self.free_names(&mut avoid);
        f.write_str(&show_sum(self, &mut Vec::new(), &avoid))
    }
}

fn show_sum(s: &NormalTerm, ctx: &mut Vec<String>, avoid: &BTreeSet<String>) -> String {
    s.monomials
        .iter()
        .map(|(m, k)| show_mono(m, *k, ctx, avoid))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn show_mono(m: &Monomial, coeff: u64, ctx: &mut Vec<String>, avoid: &BTreeSet<String>) -> String {
    let mut parts = Vec::new();
    if coeff > 1 || m.is_one() {
        parts.push(coeff.to_string());
    }
    for (fac, k) in &m.factors {
        parts.push(show_factor(fac, *k, ctx, avoid));
    }
    parts.join(" * ")
}

fn show_factor(fac: &Factor, mult: u64, ctx: &mut Vec<String>, avoid: &BTreeSet<String>) -> String {
    let base = match &fac.base {
        Base::Numeral(k) => k.to_string(),
        Base::Var { name, args } if args.is_empty() => name.clone(),
        Base::Var { name, args } => {
            let shown: Vec<String> = args
                .iter()
                .map(|a| match a {
                    Arg::Bound(i) => ctx[ctx.len() - 1 - *i as usize].clone(),
                    Arg::Free(n) => n.clone(),
                })
                .collect();
            format!("{name}({})", shown.join(","))
        }
        Base::Quant { kind, body } => {
            let mut used = avoid.clone();
            used.extend(ctx.iter().cloned());
            let x = fresh_name("x", &used);
            ctx.push(x.clone());
            let inner = show_sum(body, ctx, avoid);
            ctx.pop();
            let word = match kind {
                QuantKind::Sum => "sum",
                QuantKind::Prod => "prod",
            };
            format!("({word} {x}. {inner})")
        }
        Base::Sum(s) => format!("({})", show_sum(s, ctx, avoid)),
    };
    if fac.exponent.is_one() {
        return if mult > 1 { format!("{base}^{mult}") } else { base };
    }
    let e = &fac.exponent;
    let single = mult == 1 && e.degree() == 1 && e.factors[0].0.exponent.is_one();
    let exp = show_mono(e, mult, ctx, avoid);
    if single {
        format!("{base}^{exp}")
    } else {
        format!("{base}^({exp})")
    }
}
