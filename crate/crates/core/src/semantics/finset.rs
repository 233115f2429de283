use std::fmt;
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::eval::{checked_pow, Assignment};
use crate::error::{Error, Result};
use crate::syntax::Formula;

pub const DEFAULT_CAP: u64 = 1_000_000;

/// An element of a finite denotation: a "proof" of the formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Atom(u32),
    Unit,
    Pair(Rc<Elem>, Rc<Elem>),
    Inl(Rc<Elem>),
    Inr(Rc<Elem>),
    /// Total graph over the (ordered) domain set.
    Fun(Rc<[(Elem, Elem)]>),
    DepPair(u32, Rc<Elem>),
    /// Entry `d` is the value at domain element `d`.
    DepFun(Rc<[Elem]>),
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Atom(i) => write!(f, "#{i}"),
            Elem::Unit => write!(f, "*"),
            Elem::Pair(a, b) => write!(f, "({a}, {b})"),
            Elem::Inl(a) => write!(f, "inl {a}"),
            Elem::Inr(a) => write!(f, "inr {a}"),
            Elem::Fun(g) => {
                write!(f, "{{")?;
                for (i, (x, y)) in g.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x} -> {y}")?;
                }
                write!(f, "}}")
            }
            Elem::DepPair(d, e) => write!(f, "<{d}, {e}>"),
            Elem::DepFun(g) => {
                write!(f, "[")?;
                for (i, e) in g.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// An assignment read as a family of finite sets: an atom of value `k` is
/// `{0, …, k-1}`, a domain of size `d` is `{0, …, d-1}`.
#[derive(Debug, Clone)]
pub struct FinModel {
    pub assignment: Assignment,
    /// Largest set that will be materialized.
    pub cap: u64,
}

impl FinModel {
    pub fn new(assignment: Assignment) -> Self {
        FinModel {
            assignment,
            cap: DEFAULT_CAP,
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }
}

/// A materialized denotation in a fixed enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSet {
    pub elems: Vec<Elem>,
}

impl FinSet {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn position(&self, e: &Elem) -> Option<usize> {
        self.elems.iter().position(|x| x == e)
    }
}

enum Den {
    Elems(Vec<Elem>),
    /// Too large to list; only the count is kept.
    Count(BigUint),
}

impl Den {
    fn count(&self) -> BigUint {
        match self {
            Den::Elems(v) => BigUint::from(v.len()),
            Den::Count(c) => c.clone(),
        }
    }
}

/// ∧ is the cartesian product, ∨ the disjoint union, ψ ⇒ φ the full function
/// space, ⊤ a singleton, ∃ a dependent sum and ∀ a dependent product over the
/// quantifier's domain.
pub fn denote(f: &Formula, m: &FinModel) -> Result<FinSet> {
    let total = cardinality(f, m)?;
    if !fits(&total, m.cap) {
        return Err(Error::TooLarge {
            cardinality: total,
            cap: m.cap,
        });
    }
    match den(f, m, &mut Vec::new())? {
        Den::Elems(elems) => Ok(FinSet { elems }),
        Den::Count(cardinality) => Err(Error::TooLarge {
            cardinality,
            cap: m.cap,
        }),
    }
}

/// [`denote`] with the individual variables in `env` fixed to domain elements.
pub(crate) fn denote_in(f: &Formula, m: &FinModel, env: &mut Vec<(String, u32)>) -> Result<Vec<Elem>> {
    match den(f, m, env)? {
        Den::Elems(elems) => Ok(elems),
        Den::Count(cardinality) => Err(Error::TooLarge {
            cardinality,
            cap: m.cap,
        }),
    }
}

/// Size of the denotation, counted from the set constructions even where the
/// sets are too large to list.
pub fn cardinality(f: &Formula, m: &FinModel) -> Result<BigUint> {
    count(f, &m.assignment, &mut Vec::new())
}

fn count(f: &Formula, a: &Assignment, env: &mut Vec<(String, u32)>) -> Result<BigUint> {
    Ok(match f {
        Formula::Prime { name, args } => a.lookup(name, args, env)?.clone(),
        Formula::Top => BigUint::one(),
        Formula::And(x, y) => count(x, a, env)? * count(y, a, env)?,
        Formula::Or(x, y) => count(x, a, env)? + count(y, a, env)?,
        Formula::Implies(x, y) => checked_pow(&count(y, a, env)?, &count(x, a, env)?)?,
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let mut acc = if universal { BigUint::one() } else { BigUint::ZERO };
            for d in 0..a.domain_of(v)? {
                env.push((v.clone(), d));
                let c = count(body, a, env);
                env.pop();
                if universal {
                    acc *= c?;
                } else {
                    acc += c?;
                }
            }
            acc
        }
    })
}

fn fits(count: &BigUint, cap: u64) -> bool {
    count.to_u64().is_some_and(|c| c <= cap)
}

fn den(f: &Formula, m: &FinModel, env: &mut Vec<(String, u32)>) -> Result<Den> {
    let a = &m.assignment;
    match f {
        Formula::Prime { name, args } => {
            let k = a.lookup(name, args, env)?.clone();
            if !fits(&k, m.cap) {
                return Ok(Den::Count(k));
            }
            let k = k.to_u32().expect("bounded by cap");
            Ok(Den::Elems((0..k).map(Elem::Atom).collect()))
        }
        Formula::Top => Ok(Den::Elems(vec![Elem::Unit])),
        Formula::And(x, y) => {
            let (dx, dy) = (den(x, m, env)?, den(y, m, env)?);
            let count = dx.count() * dy.count();
            match (dx, dy) {
                (Den::Elems(xs), Den::Elems(ys)) if fits(&count, m.cap) => Ok(Den::Elems(
                    xs.iter()
                        .flat_map(|l| {
                            ys.iter()
                                .map(move |r| Elem::Pair(Rc::new(l.clone()), Rc::new(r.clone())))
                        })
                        .collect(),
                )),
                _ => Ok(Den::Count(count)),
            }
        }
        Formula::Or(x, y) => {
            let (dx, dy) = (den(x, m, env)?, den(y, m, env)?);
            let count = dx.count() + dy.count();
            match (dx, dy) {
                (Den::Elems(xs), Den::Elems(ys)) if fits(&count, m.cap) => Ok(Den::Elems(
                    xs.into_iter()
                        .map(|e| Elem::Inl(Rc::new(e)))
                        .chain(ys.into_iter().map(|e| Elem::Inr(Rc::new(e))))
                        .collect(),
                )),
                _ => Ok(Den::Count(count)),
            }
        }
        Formula::Implies(x, y) => {
            let (dom, cod) = (den(x, m, env)?, den(y, m, env)?);
            let count = checked_pow(&cod.count(), &dom.count())?;
            match (dom, cod) {
                (Den::Elems(xs), Den::Elems(ys)) if fits(&count, m.cap) => {
                    let tables = choices(&vec![ys; xs.len()]);
                    Ok(Den::Elems(
                        tables
                            .into_iter()
                            .map(|outs| Elem::Fun(xs.iter().cloned().zip(outs).collect()))
                            .collect(),
                    ))
                }
                _ => Ok(Den::Count(count)),
            }
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let size = a.domain_of(v)?;
            let mut fibres = Vec::with_capacity(size as usize);
            for d in 0..size {
                env.push((v.clone(), d));
                let r = den(body, m, env);
                env.pop();
                fibres.push(r?);
            }
            let universal = matches!(f, Formula::Forall(..));
            let count = if universal {
                fibres.iter().fold(BigUint::one(), |acc, d| acc * d.count())
            } else {
                fibres.iter().fold(BigUint::ZERO, |acc, d| acc + d.count())
            };
            if !fits(&count, m.cap) || fibres.iter().any(|d| matches!(d, Den::Count(_))) {
                return Ok(Den::Count(count));
            }
            let fibres: Vec<Vec<Elem>> = fibres
                .into_iter()
                .map(|d| match d {
                    Den::Elems(v) => v,
                    Den::Count(_) => unreachable!(),
                })
                .collect();
            if universal {
                Ok(Den::Elems(choices(&fibres).into_iter().map(|v| Elem::DepFun(v.into())).collect()))
            } else {
                Ok(Den::Elems(
                    fibres
                        .into_iter()
                        .enumerate()
                        .flat_map(|(d, es)| {
                            es.into_iter()
                                .map(move |e| Elem::DepPair(d as u32, Rc::new(e)))
                        })
                        .collect(),
                ))
            }
        }
    }
}

/// All ways of picking one element from each of `sets`, last position fastest.
fn choices(sets: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    if sets.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let total: usize = sets.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; sets.len()];
    loop {
        out.push(idx.iter().zip(sets).map(|(&i, s)| s[i].clone()).collect());
        let mut k = sets.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < sets[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, SyntaxFlavor};

    fn model(pairs: &[(&str, u64)]) -> FinModel {
        let mut a = Assignment::new();
        for (k, v) in pairs {
            a.set(k, *v);
        }
        FinModel::new(a)
    }

    fn f(s: &str) -> Formula {
        parse(s, SyntaxFlavor::Logical).unwrap()
    }

    #[test]
    fn disjoint_union() {
        let s = denote(&f("a | b"), &model(&[("a", 2), ("b", 3)])).unwrap();
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn function_space() {
        let s = denote(&f("a -> b"), &model(&[("a", 2), ("b", 3)])).unwrap();
        assert_eq!(s.len(), 9);
        let mut sorted = s.elems.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), 9);
    }

    #[test]
    fn dependent_product_enumerated() {
        let mut a = Assignment::new().with_domain(2);
        a.parse_values("P(0)=2,P(1)=3").unwrap();
        let s = denote(&f("all x. P(x)"), &FinModel::new(a)).unwrap();
        // brute force: one choice in {0,1} for x=0 times one in {0,1,2} for x=1
        let mut expected = Vec::new();
        for i in 0..2 {
            for j in 0..3 {
                expected.push(Elem::DepFun(vec![Elem::Atom(i), Elem::Atom(j)].into()));
            }
        }
        assert_eq!(s.elems, expected);
    }

    #[test]
    fn cap_reports_cardinality() {
        let m = model(&[("a", 3), ("b", 3)]).with_cap(100);
        match denote(&f("(a -> b) -> b"), &m) {
            Err(Error::TooLarge { cardinality, cap }) => {
                assert_eq!(cardinality, BigUint::from(3u64.pow(27)));
                assert_eq!(cap, 100);
            }
            other => panic!("expected TooLarge, got {other:?}"),
        }
        assert_eq!(
            cardinality(&f("(a -> b) -> b"), &m).unwrap(),
            BigUint::from(3u64.pow(27))
        );
    }
}
