mod common;

use isopoly::syntax::{
    formula_path_to_term, from_term, parse, parse_term, print, print_term, rename_apart, term_path_to_formula, to_term,
};
use isopoly::{Formula, SyntaxFlavor};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prop(seed: u64) -> Formula {
    common::formula(&mut ChaCha8Rng::seed_from_u64(seed), 5, 3)
}

fn first_order(seed: u64) -> Formula {
    common::fo_formula(&mut ChaCha8Rng::seed_from_u64(seed), 5, &mut 3, &mut Vec::new())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let f = prop(seed);
        for flavor in [SyntaxFlavor::Logical, SyntaxFlavor::Algebraic] {
            let text = print(&f, flavor).unwrap();
            prop_assert_eq!(parse(&text, flavor).unwrap(), f.clone(), "{}", text);
        }
        let g = first_order(seed);
        let text = print(&g, SyntaxFlavor::Logical).unwrap();
        prop_assert_eq!(parse(&text, SyntaxFlavor::Logical).unwrap(), g, "{}", text);
    }

    #[test]
    fn terms_and_formulas_correspond(seed in any::<u64>()) {
        for f in [prop(seed), first_order(seed)] {
            let t = to_term(&f);
            prop_assert_eq!(from_term(&t), f.clone());
            prop_assert_eq!(to_term(&from_term(&t)), t.clone());
            prop_assert_eq!(parse_term(&print_term(&t)).unwrap(), t);
        }
    }

    #[test]
    fn renaming_apart_is_idempotent(seed in any::<u64>()) {
        let f = first_order(seed);
        let r = rename_apart(&f);
        prop_assert_eq!(rename_apart(&r), r.clone());
        prop_assert!(r.alpha_eq(&f));
        prop_assert!(to_term(&r).alpha_eq(&to_term(&f)));
    }

    #[test]
    fn paths_map_both_ways(seed in any::<u64>()) {
        let f = first_order(seed);
        let t = to_term(&f);
        for p in t.positions() {
            let fp = term_path_to_formula(&t, &p).unwrap();
            prop_assert_eq!(formula_path_to_term(&f, &fp), Some(p.clone()));
            prop_assert_eq!(to_term(f.at(&fp).unwrap()), t.at(&p).unwrap().clone());
        }
    }
}

#[test]
fn precedence_and_associativity() {
    let l = |s: &str| parse(s, SyntaxFlavor::Logical).unwrap();
    assert_eq!(l("a -> b -> c"), l("a -> (b -> c)"));
    assert_eq!(l("a | b & c"), l("a | (b & c)"));
    assert_eq!(l("a & b | c -> d"), l("((a & b) | c) -> d"));
    assert_eq!(l("all x. P(x) -> Q"), l("all x. (P(x) -> Q)"));
    let a = |s: &str| parse(s, SyntaxFlavor::Algebraic).unwrap();
    assert_eq!(a("c ^ b ^ a"), l("(a -> b) -> c"));
    assert_eq!(a("a + b * c ^ d"), l("a | b & (d -> c)"));
    assert_eq!(a("1"), Formula::Top);
}

#[test]
fn malformed_input_reports_a_position() {
    for (text, col) in [("a & (b", 7), ("a -> ", 6), ("all . P", 5)] {
        match parse(text, SyntaxFlavor::Logical) {
            Err(isopoly::Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, col), "{text}"),
            other => panic!("{text}: {other:?}"),
        }
    }
    assert!(matches!(
        parse("all x. P(y)", SyntaxFlavor::Logical),
        Err(isopoly::Error::Unbound { .. })
    ));
    assert!(parse("all x. P(x)", SyntaxFlavor::Algebraic).is_err());
}
