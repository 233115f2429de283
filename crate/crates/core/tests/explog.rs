mod common;

use isopoly::explog::{check_pi_sigma, compare_levels, enf, level, level_of_normal, replay_iso, PiSigma, Side};
use isopoly::semantics::{cardinality, eval, Assignment, FinModel};
use isopoly::syntax::{parse, to_term};
use isopoly::{Formula, SyntaxFlavor};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prop_formula(seed: u64) -> Formula {
    common::formula(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3)
}

fn fo_formula(seed: u64) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    common::fo_formula(&mut rng, 4, &mut 2, &mut Vec::new())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_forms_are_in_the_grammar(seed in any::<u64>()) {
        for f in [prop_formula(seed), fo_formula(seed)] {
            let r = enf(&f).unwrap();
            prop_assert!(!matches!(check_pi_sigma(&r.normal), PiSigma::Neither(_)));
            prop_assert_eq!(replay_iso(&r.start, &r.iso_trace).unwrap(), r.normal);
        }
    }

    #[test]
    fn propositional_values_are_preserved(seed in any::<u64>()) {
        let f = prop_formula(seed);
        let r = enf(&f).unwrap();
        let names: Vec<String> = common::ATOMS.iter().map(|s| s.to_string()).collect();
        for a in common::grid(&names, 3) {
            // Towers too large to evaluate exactly are skipped.
            if let (Ok(x), Ok(y)) = (eval(&to_term(&f), &a), eval(&to_term(&r.normal), &a)) {
                prop_assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn first_order_cardinalities_are_preserved(seed in any::<u64>()) {
        let f = fo_formula(seed);
        let r = enf(&f).unwrap();
        for m in common::small_models() {
            if let (Ok(x), Ok(y)) = (cardinality(&f, &m), cardinality(&r.normal, &m)) {
                prop_assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn idempotent_and_level_stable(seed in any::<u64>()) {
        for f in [prop_formula(seed), fo_formula(seed)] {
            let once = enf(&f).unwrap().normal;
            let twice = enf(&once).unwrap();
            prop_assert!(twice.normal.alpha_eq(&once));
            prop_assert!(twice.iso_trace.is_empty());
            prop_assert_eq!(level(&once).unwrap(), level(&f).unwrap());
            prop_assert_eq!(level_of_normal(&once), Some(level(&f).unwrap()));
        }
    }
}

fn prenex(prefix: &[(bool, &str)], matrix: Formula) -> Formula {
    prefix.iter().rev().fold(matrix, |body, &(univ, x)| {
        if univ {
            Formula::forall(x, body)
        } else {
            Formula::exists(x, body)
        }
    })
}

#[test]
fn prenex_levels_never_exceed_and_alternation_matches() {
    let vars = ["x", "y", "z", "w"];
    for depth in 0..=4 {
        for mask in 0..(1u32 << depth) {
            let prefix: Vec<(bool, &str)> = (0..depth).map(|i| (mask >> i & 1 == 1, vars[i])).collect();
            let args: Vec<&str> = vars[..depth].to_vec();
            let f = prenex(&prefix, Formula::pred("P", &args));
            let c = compare_levels(&f).unwrap().unwrap();
            assert!(c.consistent, "{f:?}");
            let alternating = (1..depth).all(|i| prefix[i].0 != prefix[i - 1].0);
            if alternating {
                assert_eq!(c.cl_level, c.int_level, "{f:?}");
            }
        }
    }
}

#[test]
fn level_separating_fixtures() {
    let text = include_str!("fixtures/levels.txt");
    for line in text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let (formula, want) = line.split_once("=>").unwrap();
        let f = parse(formula.trim(), SyntaxFlavor::Logical).unwrap();
        let want = want.trim();
        let side = match &want[..1] {
            "S" => Side::Sigma,
            _ => Side::Pi,
        };
        let n: u32 = want[1..].parse().unwrap();
        let got = level(&f).unwrap();
        assert_eq!((got.side, got.n), (side, n), "{}", formula.trim());
    }
}

#[test]
fn unassigned_instances_fall_back_to_the_predicate_value() {
    let f = parse("ex x. P(x)", SyntaxFlavor::Logical).unwrap();
    let m = FinModel::new(Assignment::new().with("P", 3).with_domain(2));
    assert_eq!(cardinality(&enf(&f).unwrap().normal, &m).unwrap(), 6u32.into());
}
