use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eval::{eval, Assignment};
use crate::error::{Error, Result};
use crate::syntax::{rename_apart_term, to_term, Formula};

/// Limits for [`search_counterexample`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest value tried per atom in the grid phase.
    pub max_value: u64,
    /// Largest quantifier domain tried.
    pub max_domain: u32,
    /// Total number of assignments evaluated.
    pub max_assignments: u64,
    /// Enables a random phase after the grid when set.
    pub seed: Option<u64>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_value: 4,
            max_domain: 3,
            max_assignments: 10_000,
            seed: None,
        }
    }
}

impl SearchBudget {
    /// Parses `B=4,D=3,N=10000` (any subset, any order).
    pub fn parse(text: &str) -> Result<Self> {
        let mut b = SearchBudget::default();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("bad budget entry `{part}`")))?;
            let n: u64 = v
                .trim()
                .parse()
                .ok()
                .filter(|n| *n >= 1)
                .ok_or_else(|| Error::Invalid(format!("budget values must be positive: `{part}`")))?;
            match k.trim() {
                "B" => b.max_value = n,
                "D" => b.max_domain = u32::try_from(n).map_err(|_| Error::Invalid("D too large".into()))?,
                "N" => b.max_assignments = n,
                other => return Err(Error::Invalid(format!("unknown budget key `{other}`"))),
            }
        }
        Ok(b)
    }
}

impl std::fmt::Display for SearchBudget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "B={},D={},N={}", self.max_value, self.max_domain, self.max_assignments)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Values agreed on every assignment tried. Relative to the budget only.
    Equal { checked: u64 },
    Counterexample {
        assignment: Assignment,
        lhs: BigUint,
        rhs: BigUint,
    },
    /// The budget ran out before the grid was exhausted.
    Inconclusive { checked: u64 },
}

/// Looks for an assignment on which the two formulas evaluate differently.
///
/// The grid `{1..B}^k` over the atom names (sorted, first name most
/// significant) is walked first, with the domain size `1..D` as the outermost
/// coordinate for first-order input. The first mismatch in that order is
/// returned. After the grid, if a seed is set, random assignments with values
/// up to `2B` and per-tuple predicate tables use up the rest of the budget.
pub fn search_counterexample(f: &Formula, g: &Formula, budget: &SearchBudget) -> Result<Verdict> {
    let lhs = rename_apart_term(&to_term(f));
    let rhs = rename_apart_term(&to_term(g));
    let mut symbols = f.atom_names();
    symbols.extend(g.atom_names());
    let symbols: Vec<String> = symbols.into_iter().collect();
    let first_order = f.has_quantifiers() || g.has_quantifiers() || !f.is_propositional() || !g.is_propositional();
    let domains: Vec<u32> = if first_order {
        (1..=budget.max_domain).collect()
    } else {
        vec![0]
    };

    let check = |a: &Assignment| -> Result<Option<Verdict>> {
        let l = eval(&lhs, a)?;
        let r = eval(&rhs, a)?;
        Ok((l != r).then(|| Verdict::Counterexample {
            assignment: a.clone(),
            lhs: l,
            rhs: r,
        }))
    };

    let mut checked = 0u64;
    for &d in &domains {
        let mut digits = vec![1u64; symbols.len()];
        loop {
            if checked >= budget.max_assignments {
                return Ok(Verdict::Inconclusive { checked });
            }
            let mut a = Assignment::new();
            if first_order {
                a.default_domain = Some(d);
            }
            for (s, v) in symbols.iter().zip(&digits) {
                a.set(s, *v);
            }
            checked += 1;
            if let Some(v) = check(&a)? {
                return Ok(v);
            }
            if !odometer(&mut digits, budget.max_value) {
                break;
            }
        }
    }

    if let Some(seed) = budget.seed {
        let arities = arities(f, g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while checked < budget.max_assignments {
            let mut a = Assignment::new();
            let d = if first_order {
                rng.gen_range(1..=budget.max_domain)
            } else {
                0
            };
            if first_order {
                a.default_domain = Some(d);
            }
            for s in &symbols {
                a.set(s, rng.gen_range(1..=2 * budget.max_value));
                let arity = arities.get(s).copied().unwrap_or(0);
                if first_order && arity > 0 {
                    let mut tuple = vec![0u64; arity];
                    loop {
                        let key = format!(
                            "{s}({})",
                            tuple.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                        );
                        a.set(&key, rng.gen_range(1..=2 * budget.max_value));
                        if !odometer0(&mut tuple, d as u64) {
                            break;
                        }
                    }
                }
            }
            checked += 1;
            if let Some(v) = check(&a)? {
                return Ok(v);
            }
        }
    }
    Ok(Verdict::Equal { checked })
}

/// Advances digits in `1..=max`, last digit fastest. False once wrapped.
fn odometer(digits: &mut [u64], max: u64) -> bool {
    for d in digits.iter_mut().rev() {
        if *d < max {
            *d += 1;
            return true;
        }
        *d = 1;
    }
    false
}

fn odometer0(digits: &mut [u64], size: u64) -> bool {
    for d in digits.iter_mut().rev() {
        if *d + 1 < size {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

fn arities(f: &Formula, g: &Formula) -> BTreeMap<String, usize> {
    fn go(f: &Formula, out: &mut BTreeMap<String, usize>) {
        match f {
            Formula::Prime { name, args } => {
                out.insert(name.clone(), args.len());
            }
            _ => f.children().into_iter().for_each(|c| go(c, out)),
        }
    }
    let mut out = BTreeMap::new();
    go(f, &mut out);
    go(g, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, SyntaxFlavor};

    fn f(s: &str) -> Formula {
        parse(s, SyntaxFlavor::Logical).unwrap()
    }

    #[test]
    fn first_lexicographic_mismatch() {
        let v = search_counterexample(&f("alpha & alpha"), &f("alpha"), &SearchBudget::default()).unwrap();
        assert_eq!(
            v,
            Verdict::Counterexample {
                assignment: Assignment::new().with("alpha", 2),
                lhs: 4u32.into(),
                rhs: 2u32.into(),
            }
        );
    }

    #[test]
    fn commutativity_is_equal() {
        let v = search_counterexample(&f("a | b"), &f("b | a"), &SearchBudget::default()).unwrap();
        assert_eq!(v, Verdict::Equal { checked: 16 });
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let b = SearchBudget {
            max_assignments: 5,
            ..SearchBudget::default()
        };
        let v = search_counterexample(&f("a | b"), &f("b | a"), &b).unwrap();
        assert_eq!(v, Verdict::Inconclusive { checked: 5 });
    }

    #[test]
    fn random_phase_uses_seed() {
        let b = SearchBudget {
            max_assignments: 100,
            seed: Some(7),
            ..SearchBudget::default()
        };
        let v = search_counterexample(&f("a | b"), &f("b | a"), &b).unwrap();
        assert_eq!(v, Verdict::Equal { checked: 100 });
    }

    #[test]
    fn first_order_counterexample_reproduces() {
        // Equal whenever P is constant across the domain, so the grid misses it.
        let lhs = f("all x. P(x)");
        let rhs = f("ex x. P(x) & T");
        let grid = SearchBudget {
            max_value: 1,
            max_domain: 1,
            ..SearchBudget::default()
        };
        assert!(matches!(
            search_counterexample(&lhs, &rhs, &grid).unwrap(),
            Verdict::Equal { checked: 1 }
        ));
        let seeded = SearchBudget {
            max_domain: 2,
            seed: Some(1),
            ..grid
        };
        let v = search_counterexample(&lhs, &rhs, &seeded).unwrap();
        match v {
            Verdict::Counterexample { assignment, lhs: l, rhs: r } => {
                assert_ne!(l, r);
                assert_eq!(eval(&to_term(&lhs), &assignment).unwrap(), l);
                assert_eq!(eval(&to_term(&rhs), &assignment).unwrap(), r);
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn budget_text() {
        let b = SearchBudget::parse("B=5,N=20").unwrap();
        assert_eq!((b.max_value, b.max_domain, b.max_assignments), (5, 3, 20));
        assert!(SearchBudget::parse("B=0").is_err());
        assert!(SearchBudget::parse("Z=1").is_err());
    }
}
