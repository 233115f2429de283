//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

pub mod golden;

use isopoly::hsi::{match_step, unbound_metas, AxiomId, Direction, RewriteStep, Subst, BINDER};
use isopoly::semantics::{Assignment, FinModel};
use isopoly::{Formula, Path, Term};
use rand::seq::SliceRandom;
use rand::Rng;

pub const ATOMS: [&str; 3] = ["a", "b", "c"];

/// Random propositional formula over the first `atoms` of [`ATOMS`].
pub fn formula<R: Rng>(rng: &mut R, depth: u32, atoms: usize) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return if rng.gen_ratio(1, 8) {
            Formula::Top
        } else {
            Formula::atom(ATOMS[rng.gen_range(0..atoms)])
        };
    }
    let a = formula(rng, depth - 1, atoms);
    let b = formula(rng, depth - 1, atoms);
    match rng.gen_range(0..3) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        _ => Formula::implies(a, b),
    }
}

/// Random first-order formula with at most `quants` quantifiers over the
/// unary predicates `P`, `Q` and the atoms `a`, `b`.
pub fn fo_formula<R: Rng>(rng: &mut R, depth: u32, quants: &mut u32, scope: &mut Vec<String>) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        if !scope.is_empty() && rng.gen_ratio(2, 3) {
            let x = scope.choose(rng).unwrap().clone();
            let p = ["P", "Q"].choose(rng).unwrap();
            return Formula::pred(p, &[&x]);
        }
        return if rng.gen_ratio(1, 8) {
            Formula::Top
        } else {
            Formula::atom(["a", "b"].choose(rng).unwrap())
        };
    }
    if *quants > 0 && rng.gen_ratio(1, 3) {
        *quants -= 1;
        let x = format!("x{}", scope.len());
        scope.push(x.clone());
        let body = fo_formula(rng, depth - 1, quants, scope);
        scope.pop();
        return if rng.gen() {
            Formula::forall(&x, body)
        } else {
            Formula::exists(&x, body)
        };
    }
    let a = fo_formula(rng, depth - 1, quants, scope);
    let b = fo_formula(rng, depth - 1, quants, scope);
    match rng.gen_range(0..3) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        _ => Formula::implies(a, b),
    }
}

/// Random propositional term. Exponents are kept free of powers so that
/// values stay small enough to evaluate exactly.
pub fn term<R: Rng>(rng: &mut R, depth: u32) -> Term {
    term_in(rng, depth, true)
}

fn term_in<R: Rng>(rng: &mut R, depth: u32, powers: bool) -> Term {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return if rng.gen_ratio(1, 6) {
            Term::One
        } else {
            Term::var(ATOMS[rng.gen_range(0..ATOMS.len())])
        };
    }
    let k = if powers { 3 } else { 2 };
    match rng.gen_range(0..k) {
        0 => Term::sum(term_in(rng, depth - 1, powers), term_in(rng, depth - 1, powers)),
        1 => Term::prod(term_in(rng, depth - 1, powers), term_in(rng, depth - 1, powers)),
        _ => Term::pow(term_in(rng, depth - 1, powers), term_in(rng, depth.min(3) - 1, false)),
    }
}

/// Every single HSI step that applies somewhere in `t`. Right-to-left
/// readings that introduce a metavariable get `fill` for it.
pub fn applicable_steps(t: &Term, fill: &Term) -> Vec<RewriteStep> {
    let mut out = Vec::new();
    for path in t.positions() {
        for axiom in AxiomId::ALL {
            for dir in [Direction::LR, Direction::RL] {
                let mut extra = Subst::new();
                for m in unbound_metas(axiom, dir) {
                    let v = if m == BINDER { Term::var("z") } else { fill.clone() };
                    extra.insert(m.to_string(), v);
                }
                if let Some(s) = match_step(t, axiom, dir, &path, &extra) {
                    out.push(s);
                }
            }
        }
    }
    out
}

pub fn random_assignment<R: Rng>(rng: &mut R, names: &[&str], max: u64) -> Assignment {
    let mut a = Assignment::new();
    for n in names {
        a.set(n, rng.gen_range(1..=max));
    }
    a
}

/// All assignments of `1..=max` to `names`, last name fastest.
pub fn grid(names: &[String], max: u64) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for n in names {
        let mut next = Vec::new();
        for a in &out {
            for v in 1..=max {
                next.push(a.clone().with(n, v));
            }
        }
        out = next;
    }
    out
}

pub fn root() -> Path {
    Path::root()
}

/// Models with domain and atom sizes at most 2 over `P`, `Q`, `a`, `b`.
pub fn small_models() -> Vec<FinModel> {
    let mut out = Vec::new();
    for d in 1..=2u32 {
        let mut names: Vec<String> = vec!["a".into(), "b".into()];
        for p in ["P", "Q"] {
            names.extend((0..d).map(|e| format!("{p}({e})")));
        }
        for a in grid(&names, 2) {
            out.push(FinModel::new(a.with_domain(d)));
        }
    }
    out
}

/// Independent count of proofs of `f`: products, sums and powers of
/// machine integers, straight from the formula. `None` on overflow or a
/// missing value.
pub fn oracle_count(f: &Formula, a: &Assignment) -> Option<u128> {
    fn go(f: &Formula, a: &Assignment, env: &mut Vec<(String, u32)>) -> Option<u128> {
        use num_traits::ToPrimitive;
        match f {
            Formula::Top => Some(1),
            Formula::Prime { name, args } => {
                let shown: Vec<String> = args
                    .iter()
                    .map(|x| env.iter().rev().find(|(v, _)| v == x).map_or(x.clone(), |(_, d)| d.to_string()))
                    .collect();
                let key = format!("{name}({})", shown.join(","));
                let v = if args.is_empty() { None } else { a.values.get(&key) };
                v.or_else(|| a.values.get(name)).and_then(|v| v.to_u128())
            }
            Formula::And(x, y) => go(x, a, env)?.checked_mul(go(y, a, env)?),
            Formula::Or(x, y) => go(x, a, env)?.checked_add(go(y, a, env)?),
            Formula::Implies(x, y) => {
                let base = go(y, a, env)?;
                let exp = u32::try_from(go(x, a, env)?).ok()?;
                base.checked_pow(exp)
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                let size = a.domains.get(x).copied().or(a.default_domain)?;
                let mut acc: u128 = if matches!(f, Formula::Forall(..)) { 1 } else { 0 };
                for d in 0..size {
                    env.push((x.clone(), d));
                    let v = go(body, a, env);
                    env.pop();
                    acc = if matches!(f, Formula::Forall(..)) { acc.checked_mul(v?)? } else { acc.checked_add(v?)? };
                }
                Some(acc)
            }
        }
    }
    go(f, a, &mut Vec::new())
}
