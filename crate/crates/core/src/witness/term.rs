use std::fmt;
use std::rc::Rc;

use crate::syntax::{print, Formula, SyntaxFlavor};

/// Lambda terms with pairs, sums, unit and domain-indexed pairs/functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofTerm {
    Var(String),
    Lam(String, Rc<ProofTerm>),
    App(Rc<ProofTerm>, Rc<ProofTerm>),
    Pair(Rc<ProofTerm>, Rc<ProofTerm>),
    Fst(Rc<ProofTerm>),
    Snd(Rc<ProofTerm>),
    Inl(Rc<ProofTerm>),
    Inr(Rc<ProofTerm>),
    /// `case s { inl x => l, inr y => r }`
    Case(Rc<ProofTerm>, String, Rc<ProofTerm>, String, Rc<ProofTerm>),
    Star,
    /// `<x, t>`: a witness `x` of the domain paired with `t`.
    DPair(String, Rc<ProofTerm>),
    /// `let <x, u> = s in body`
    DSplit(Rc<ProofTerm>, String, String, Rc<ProofTerm>),
    /// `/\x. body`
    DLam(String, Rc<ProofTerm>),
    /// `t @x`
    DApp(Rc<ProofTerm>, String),
    /// A term with its type, so that redexes can be checked.
    Ann(Rc<ProofTerm>, Formula),
}

pub(crate) mod build {
    use super::*;

    pub fn var(x: &str) -> ProofTerm {
        ProofTerm::Var(x.to_string())
    }

    pub fn lam(x: &str, b: ProofTerm) -> ProofTerm {
        ProofTerm::Lam(x.to_string(), Rc::new(b))
    }

    pub fn app(f: ProofTerm, a: ProofTerm) -> ProofTerm {
        ProofTerm::App(Rc::new(f), Rc::new(a))
    }

    pub fn pair(a: ProofTerm, b: ProofTerm) -> ProofTerm {
        ProofTerm::Pair(Rc::new(a), Rc::new(b))
    }

    pub fn fst(p: ProofTerm) -> ProofTerm {
        ProofTerm::Fst(Rc::new(p))
    }

    pub fn snd(p: ProofTerm) -> ProofTerm {
        ProofTerm::Snd(Rc::new(p))
    }

    pub fn inl(a: ProofTerm) -> ProofTerm {
        ProofTerm::Inl(Rc::new(a))
    }

    pub fn inr(a: ProofTerm) -> ProofTerm {
        ProofTerm::Inr(Rc::new(a))
    }

    pub fn case(s: ProofTerm, x: &str, l: ProofTerm, y: &str, r: ProofTerm) -> ProofTerm {
        ProofTerm::Case(Rc::new(s), x.to_string(), Rc::new(l), y.to_string(), Rc::new(r))
    }

    pub fn dpair(x: &str, t: ProofTerm) -> ProofTerm {
        ProofTerm::DPair(x.to_string(), Rc::new(t))
    }

    pub fn dsplit(s: ProofTerm, x: &str, u: &str, body: ProofTerm) -> ProofTerm {
        ProofTerm::DSplit(Rc::new(s), x.to_string(), u.to_string(), Rc::new(body))
    }

    pub fn dlam(x: &str, b: ProofTerm) -> ProofTerm {
        ProofTerm::DLam(x.to_string(), Rc::new(b))
    }

    pub fn dapp(t: ProofTerm, x: &str) -> ProofTerm {
        ProofTerm::DApp(Rc::new(t), x.to_string())
    }

    pub fn ann(t: ProofTerm, ty: Formula) -> ProofTerm {
        ProofTerm::Ann(Rc::new(t), ty)
    }

    pub fn id() -> ProofTerm {
        lam("x", var("x"))
    }
}

impl ProofTerm {
    pub fn size(&self) -> usize {
        use ProofTerm::*;
        match self {
            Var(_) | Star => 1,
            Lam(_, b) | Fst(b) | Snd(b) | Inl(b) | Inr(b) | DPair(_, b) | DLam(_, b) | DApp(b, _) | Ann(b, _) => {
                1 + b.size()
            }
            App(a, b) | Pair(a, b) | DSplit(a, _, _, b) => 1 + a.size() + b.size(),
            Case(s, _, l, _, r) => 1 + s.size() + l.size() + r.size(),
        }
    }
}

// Levels: 0 binder or case, 1 application, 2 atom.
fn show(t: &ProofTerm, ctx: u8, out: &mut String) {
    use ProofTerm::*;
    let level = match t {
        Var(_) | Star | Pair(..) | DPair(..) | Ann(..) => 2,
        App(..) | Fst(_) | Snd(_) | Inl(_) | Inr(_) | DApp(..) => 1,
        Lam(..) | DLam(..) | Case(..) | DSplit(..) => 0,
    };
    let wrap = level < ctx;
    if wrap {
        out.push('(');
    }
    match t {
        Var(x) => out.push_str(x),
        Star => out.push('*'),
        Lam(x, b) => {
            out.push_str(&format!("\\{x}. "));
            show(b, 0, out);
        }
        DLam(x, b) => {
            out.push_str(&format!("/\\{x}. "));
            show(b, 0, out);
        }
        App(f, a) => {
            show(f, 1, out);
            out.push(' ');
            show(a, 2, out);
        }
        DApp(f, x) => {
            show(f, 1, out);
            out.push_str(&format!(" @{x}"));
        }
        Fst(a) | Snd(a) | Inl(a) | Inr(a) => {
            out.push_str(match t {
                Fst(_) => "fst ",
                Snd(_) => "snd ",
                Inl(_) => "inl ",
                _ => "inr ",
            });
            show(a, 2, out);
        }
        Pair(a, b) => {
            out.push('(');
            show(a, 0, out);
            out.push_str(", ");
            show(b, 0, out);
            out.push(')');
        }
        DPair(x, a) => {
            out.push_str(&format!("<{x}, "));
            show(a, 0, out);
            out.push('>');
        }
        Case(s, x, l, y, r) => {
            out.push_str("case ");
            show(s, 1, out);
            out.push_str(&format!(" {{ inl {x} => "));
            show(l, 0, out);
            out.push_str(&format!(", inr {y} => "));
            show(r, 0, out);
            out.push_str(" }");
        }
        DSplit(s, x, u, b) => {
            out.push_str(&format!("let <{x}, {u}> = "));
            show(s, 1, out);
            out.push_str(" in ");
            show(b, 0, out);
        }
        Ann(a, ty) => {
            out.push('(');
            show(a, 0, out);
            out.push_str(" : ");
            out.push_str(&print(ty, SyntaxFlavor::Logical).expect("logical printing is total"));
            out.push(')');
        }
    }
    if wrap {
        out.push(')');
    }
}

impl fmt::Display for ProofTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        show(self, 0, &mut s);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::build::*;

    #[test]
    fn swap_prints_compactly() {
        let swap = lam("z", case(var("z"), "u", inr(var("u")), "v", inl(var("v"))));
        assert_eq!(swap.to_string(), "\\z. case z { inl u => inr u, inr v => inl v }");
    }

    #[test]
    fn application_and_projections() {
        let t = lam("f", lam("p", app(app(var("f"), fst(var("p"))), snd(var("p")))));
        assert_eq!(t.to_string(), "\\f. \\p. f (fst p) (snd p)");
        assert_eq!(app(lam("x", var("x")), var("y")).to_string(), "(\\x. x) y");
        assert_eq!(dapp(app(var("f"), var("c")), "x").to_string(), "f c @x");
    }
}
