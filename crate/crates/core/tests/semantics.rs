mod common;

use isopoly::semantics::{cardinality, denote, eval, search_counterexample, Assignment, FinModel, SearchBudget, Verdict};
use isopoly::syntax::{parse, to_term};
use isopoly::{Formula, SyntaxFlavor};
use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prop(seed: u64) -> Formula {
    common::formula(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3)
}

fn first_order(seed: u64) -> Formula {
    common::fo_formula(&mut ChaCha8Rng::seed_from_u64(seed), 4, &mut 2, &mut Vec::new())
}

fn names() -> Vec<String> {
    common::ATOMS.iter().map(|s| s.to_string()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cardinality_matches_value(seed in any::<u64>()) {
        let f = prop(seed);
        let t = to_term(&f);
        for a in common::grid(&names(), 3) {
            let Some(want) = common::oracle_count(&f, &a) else { continue };
            prop_assert_eq!(eval(&t, &a).unwrap(), BigUint::from(want));
            let m = FinModel::new(a).with_cap(20_000);
            prop_assert_eq!(cardinality(&f, &m).unwrap(), BigUint::from(want));
            match denote(&f, &m) {
                Ok(set) => prop_assert_eq!(set.len() as u128, want),
                Err(isopoly::Error::TooLarge { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn first_order_cardinality_matches_value(seed in any::<u64>()) {
        let f = first_order(seed);
        let t = to_term(&f);
        for m in common::small_models() {
            let Some(want) = common::oracle_count(&f, &m.assignment) else { continue };
            prop_assert_eq!(eval(&t, &m.assignment).unwrap(), BigUint::from(want));
            prop_assert_eq!(cardinality(&f, &m).unwrap(), BigUint::from(want));
        }
    }

    #[test]
    fn values_are_positive(seed in any::<u64>(), a in 1u64..6, b in 1u64..6, c in 1u64..6) {
        let t = to_term(&prop(seed));
        let asg = Assignment::new().with("a", a).with("b", b).with("c", c);
        if let Ok(v) = eval(&t, &asg) {
            prop_assert!(v >= BigUint::one());
        }
    }

    #[test]
    fn counterexamples_reproduce(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (f, g) = (prop(s1), prop(s2));
        let budget = SearchBudget { max_value: 3, max_assignments: 200, ..SearchBudget::default() };
        if let Ok(Verdict::Counterexample { assignment, lhs, rhs }) = search_counterexample(&f, &g, &budget) {
            prop_assert_ne!(&lhs, &rhs);
            prop_assert_eq!(eval(&to_term(&f), &assignment).unwrap(), lhs);
            prop_assert_eq!(eval(&to_term(&g), &assignment).unwrap(), rhs);
        }
    }
}

fn l(s: &str) -> Formula {
    parse(s, SyntaxFlavor::Logical).unwrap()
}

#[test]
fn first_counterexample_in_grid_order() {
    let budget = SearchBudget::default();
    // Grid order: atoms sorted by name, last name fastest.
    let v = search_counterexample(&l("a & b"), &l("a | b"), &budget).unwrap();
    let Verdict::Counterexample { assignment, .. } = v else { panic!("{v:?}") };
    assert_eq!(assignment.to_string(), "a=1,b=1");
    let v = search_counterexample(&l("a & a"), &l("a"), &budget).unwrap();
    let Verdict::Counterexample { assignment, lhs, rhs } = v else { panic!("{v:?}") };
    assert_eq!((assignment.to_string(), lhs, rhs), ("a=2".into(), 4u32.into(), 2u32.into()));
}

#[test]
fn searches_are_seeded() {
    let budget = |seed| SearchBudget { seed: Some(seed), max_value: 2, ..SearchBudget::default() };
    let (f, g) = (l("a | b"), l("b | a"));
    assert_eq!(
        search_counterexample(&f, &g, &budget(3)).unwrap(),
        search_counterexample(&f, &g, &budget(3)).unwrap()
    );
    assert_eq!(
        search_counterexample(&f, &g, &budget(3)).unwrap(),
        Verdict::Equal { checked: 10_000 }
    );
    let no_seed = SearchBudget { max_value: 2, ..SearchBudget::default() };
    assert_eq!(search_counterexample(&f, &g, &no_seed).unwrap(), Verdict::Equal { checked: 4 });
}

#[test]
fn first_order_search_varies_the_domain() {
    let v = search_counterexample(&l("all x. P(x)"), &l("P"), &SearchBudget::default()).unwrap();
    let Verdict::Counterexample { assignment, lhs, rhs } = v else { panic!("{v:?}") };
    assert_eq!(assignment.default_domain, Some(2));
    assert_eq!((lhs, rhs), (4u32.into(), 2u32.into()));
}
