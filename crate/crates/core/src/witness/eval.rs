use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use super::term::ProofTerm;
use crate::error::{Error, Result};
use crate::semantics::{denote_in, Elem, FinModel};
use crate::syntax::Formula;

type DomEnv = Vec<(String, u32)>;

/// A materialized denotation with the position of every element.
struct Den {
    elems: Rc<Vec<Elem>>,
    index: HashMap<Elem, usize>,
}

#[derive(Clone)]
enum Binding<'f> {
    Val(Value<'f>),
    Dom(u32),
}

#[derive(Clone, Default)]
struct Env<'f>(Option<Rc<(String, Binding<'f>, Env<'f>)>>);

impl<'f> Env<'f> {
    fn bind(&self, x: &str, b: Binding<'f>) -> Env<'f> {
        Env(Some(Rc::new((x.to_string(), b, self.clone()))))
    }

    fn get(&self, x: &str) -> Result<&Binding<'f>> {
        let mut cur = self;
        while let Some(node) = &cur.0 {
            if node.0 == x {
                return Ok(&node.1);
            }
            cur = &node.2;
        }
        Err(Error::Type(format!("unbound variable `{x}` at run time")))
    }
}

#[derive(Clone)]
enum Value<'f> {
    Star,
    Atom(u32),
    Pair(Rc<Value<'f>>, Rc<Value<'f>>),
    Inl(Rc<Value<'f>>),
    Inr(Rc<Value<'f>>),
    DPair(u32, Rc<Value<'f>>),
    Closure(Env<'f>, String, Rc<ProofTerm>),
    DClosure(Env<'f>, String, Rc<ProofTerm>),
    /// A function element of the model, read at type `dom ⇒ cod`; outputs
    /// are listed in the order of `den(dom)`.
    Table(Rc<Vec<Elem>>, &'f Formula, &'f Formula, DomEnv),
    /// A dependent function element, read at type `∀var. body`.
    DTable(Rc<Vec<Elem>>, &'f str, &'f Formula, DomEnv),
}

fn stuck(what: &str) -> Error {
    Error::Type(format!("evaluation is stuck: {what}"))
}

/// Evaluates proof terms against one finite model. Types are borrowed from
/// formulas that outlive the machine, so their addresses identify them.
pub(crate) struct Machine<'m, 'f> {
    model: &'m FinModel,
    dens: RefCell<HashMap<(*const Formula, DomEnv), Rc<Den>>>,
    _types: std::marker::PhantomData<&'f Formula>,
}

impl<'m, 'f> Machine<'m, 'f> {
    pub(crate) fn new(model: &'m FinModel) -> Self {
        Machine {
            model,
            dens: RefCell::new(HashMap::new()),
            _types: std::marker::PhantomData,
        }
    }

    fn den(&self, f: &'f Formula, denv: &DomEnv) -> Result<Rc<Den>> {
        let key = (f as *const Formula, denv.clone());
        if let Some(d) = self.dens.borrow().get(&key) {
            return Ok(d.clone());
        }
        let elems = denote_in(f, self.model, &mut denv.clone())?;
        let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let d = Rc::new(Den {
            elems: Rc::new(elems),
            index,
        });
        self.dens.borrow_mut().insert(key, d.clone());
        Ok(d)
    }

    pub(crate) fn elems(&self, f: &'f Formula) -> Result<Rc<Vec<Elem>>> {
        Ok(self.den(f, &Vec::new())?.elems.clone())
    }

    fn eval(&self, t: &ProofTerm, env: &Env<'f>) -> Result<Value<'f>> {
        use ProofTerm::*;
        Ok(match t {
            Var(x) => match env.get(x)? {
                Binding::Val(v) => v.clone(),
                Binding::Dom(_) => return Err(stuck(&format!("`{x}` is a domain variable"))),
            },
            Lam(x, b) => Value::Closure(env.clone(), x.clone(), b.clone()),
            DLam(x, b) => Value::DClosure(env.clone(), x.clone(), b.clone()),
            App(f, a) => {
                let f = self.eval(f, env)?;
                let a = self.eval(a, env)?;
                self.apply(&f, a)?
            }
            DApp(f, x) => {
                let d = self.dom(env, x)?;
                let f = self.eval(f, env)?;
                self.dapply(&f, d)?
            }
            Pair(a, b) => Value::Pair(Rc::new(self.eval(a, env)?), Rc::new(self.eval(b, env)?)),
            Fst(p) | Snd(p) => match self.eval(p, env)? {
                Value::Pair(a, b) => (*if matches!(t, Fst(_)) { a } else { b }).clone(),
                _ => return Err(stuck("projection from a non-pair")),
            },
            Inl(a) => Value::Inl(Rc::new(self.eval(a, env)?)),
            Inr(a) => Value::Inr(Rc::new(self.eval(a, env)?)),
            Case(s, x, l, y, r) => match self.eval(s, env)? {
                Value::Inl(v) => self.eval(l, &env.bind(x, Binding::Val((*v).clone())))?,
                Value::Inr(v) => self.eval(r, &env.bind(y, Binding::Val((*v).clone())))?,
                _ => return Err(stuck("case on a non-injection")),
            },
            Star => Value::Star,
            DPair(x, a) => Value::DPair(self.dom(env, x)?, Rc::new(self.eval(a, env)?)),
            DSplit(s, x, u, b) => match self.eval(s, env)? {
                Value::DPair(d, v) => {
                    let env = env.bind(x, Binding::Dom(d)).bind(u, Binding::Val((*v).clone()));
                    self.eval(b, &env)?
                }
                _ => return Err(stuck("split of a non-pair")),
            },
            Ann(a, _) => self.eval(a, env)?,
        })
    }

    fn dom(&self, env: &Env<'f>, x: &str) -> Result<u32> {
        match env.get(x)? {
            Binding::Dom(d) => Ok(*d),
            Binding::Val(_) => Err(stuck(&format!("`{x}` is not a domain variable"))),
        }
    }

    fn apply(&self, f: &Value<'f>, a: Value<'f>) -> Result<Value<'f>> {
        match f {
            Value::Closure(env, x, body) => self.eval(body, &env.bind(x, Binding::Val(a))),
            Value::Table(outs, dom, cod, denv) => {
                let key = self.reify(&a, dom, denv)?;
                let den = self.den(dom, denv)?;
                let i = den.index.get(&key).ok_or_else(|| stuck("argument outside the function's domain"))?;
                self.reflect(&outs[*i], cod, denv)
            }
            _ => Err(stuck("application of a non-function")),
        }
    }

    fn dapply(&self, f: &Value<'f>, d: u32) -> Result<Value<'f>> {
        match f {
            Value::DClosure(env, x, body) => self.eval(body, &env.bind(x, Binding::Dom(d))),
            Value::DTable(entries, x, body, denv) => {
                let e = entries.get(d as usize).ok_or_else(|| stuck("domain element out of range"))?;
                let mut denv = denv.clone();
                denv.push((x.to_string(), d));
                self.reflect(e, body, &denv)
            }
            _ => Err(stuck("instantiation of a non-universal")),
        }
    }

    /// Reads a model element as a value of type `ty`.
    fn reflect(&self, e: &Elem, ty: &'f Formula, denv: &DomEnv) -> Result<Value<'f>> {
        Ok(match (e, ty) {
            (Elem::Unit, Formula::Top) => Value::Star,
            (Elem::Atom(k), Formula::Prime { .. }) => Value::Atom(*k),
            (Elem::Pair(a, b), Formula::And(x, y)) => {
                Value::Pair(Rc::new(self.reflect(a, x, denv)?), Rc::new(self.reflect(b, y, denv)?))
            }
            (Elem::Inl(a), Formula::Or(x, _)) => Value::Inl(Rc::new(self.reflect(a, x, denv)?)),
            (Elem::Inr(b), Formula::Or(_, y)) => Value::Inr(Rc::new(self.reflect(b, y, denv)?)),
            (Elem::Fun(graph), Formula::Implies(x, y)) => Value::Table(
                Rc::new(graph.iter().map(|(_, out)| out.clone()).collect()),
                x,
                y,
                denv.clone(),
            ),
            (Elem::DepFun(entries), Formula::Forall(x, body)) => {
                Value::DTable(Rc::new(entries.to_vec()), x, body, denv.clone())
            }
            (Elem::DepPair(d, a), Formula::Exists(x, body)) => {
                let mut denv = denv.clone();
                denv.push((x.clone(), *d));
                Value::DPair(*d, Rc::new(self.reflect(a, body, &denv)?))
            }
            _ => return Err(stuck("element does not fit its type")),
        })
    }

    /// The model element a value of type `ty` stands for.
    fn reify(&self, v: &Value<'f>, ty: &'f Formula, denv: &DomEnv) -> Result<Elem> {
        Ok(match (v, ty) {
            (Value::Star, Formula::Top) => Elem::Unit,
            (Value::Atom(k), Formula::Prime { .. }) => Elem::Atom(*k),
            (Value::Pair(a, b), Formula::And(x, y)) => {
                Elem::Pair(Rc::new(self.reify(a, x, denv)?), Rc::new(self.reify(b, y, denv)?))
            }
            (Value::Inl(a), Formula::Or(x, _)) => Elem::Inl(Rc::new(self.reify(a, x, denv)?)),
            (Value::Inr(b), Formula::Or(_, y)) => Elem::Inr(Rc::new(self.reify(b, y, denv)?)),
            (Value::Closure(..) | Value::Table(..), Formula::Implies(x, y)) => {
                let dom = self.den(x, denv)?;
                let mut graph = Vec::with_capacity(dom.elems.len());
                for k in dom.elems.iter() {
                    let arg = self.reflect(k, x, denv)?;
                    let out = self.apply(v, arg)?;
                    graph.push((k.clone(), self.reify(&out, y, denv)?));
                }
                Elem::Fun(graph.into())
            }
            (Value::DClosure(..) | Value::DTable(..), Formula::Forall(x, body)) => {
                let size = self.model.assignment.domain_of(x)?;
                let mut entries = Vec::with_capacity(size as usize);
                for d in 0..size {
                    let mut denv = denv.clone();
                    denv.push((x.clone(), d));
                    entries.push(self.reify(&self.dapply(v, d)?, body, &denv)?);
                }
                Elem::DepFun(entries.into())
            }
            (Value::DPair(d, a), Formula::Exists(x, body)) => {
                let mut denv = denv.clone();
                denv.push((x.clone(), *d));
                Elem::DepPair(*d, Rc::new(self.reify(a, body, &denv)?))
            }
            _ => return Err(stuck("value does not fit its type")),
        })
    }

    /// Applies the closed function `f` to every element of `den(from)`, reading
    /// results at type `to`.
    pub(crate) fn image(&self, f: &ProofTerm, from: &'f Formula, to: &'f Formula, e: &Elem) -> Result<Elem> {
        let fv = self.eval(f, &Env::default())?;
        let arg = self.reflect(e, from, &Vec::new())?;
        let out = self.apply(&fv, arg)?;
        self.reify(&out, to, &Vec::new())
    }
}

/// Outcome of checking that two functions are mutually inverse on a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTrip {
    pub ok: bool,
    /// Elements of source and target that were checked.
    pub checked: usize,
    /// First element whose round trip is not the identity, with its side.
    pub failure: Option<String>,
}

pub(crate) fn round_trip(
    fwd: &ProofTerm,
    bwd: &ProofTerm,
    source: &Formula,
    target: &Formula,
    model: &FinModel,
) -> Result<RoundTrip> {
    let m = Machine::new(model);
    let src = m.elems(source)?;
    let dst = m.elems(target)?;
    let dst_set: HashSet<&Elem> = dst.iter().collect();
    let src_set: HashSet<&Elem> = src.iter().collect();
    let fail = |side: &str, e: &Elem, checked: usize| RoundTrip {
        ok: false,
        checked,
        failure: Some(format!("{side} element {e}")),
    };
    let mut checked = 0;
    for e in src.iter() {
        let img = m.image(fwd, source, target, e)?;
        if !dst_set.contains(&img) || m.image(bwd, target, source, &img)? != *e {
            return Ok(fail("source", e, checked));
        }
        checked += 1;
    }
    for e in dst.iter() {
        let img = m.image(bwd, target, source, e)?;
        if !src_set.contains(&img) || m.image(fwd, source, target, &img)? != *e {
            return Ok(fail("target", e, checked));
        }
        checked += 1;
    }
    Ok(RoundTrip {
        ok: true,
        checked,
        failure: None,
    })
}
