mod common;

use isopoly::hsi::{apply_axiom, normal_form, prove_equal, replay, AxiomId, Direction, RewriteTrace};
use isopoly::semantics::{eval, search_counterexample, SearchBudget, Verdict};
use isopoly::syntax::{from_term, parse_term, print_term};
use isopoly::{Error, Term};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn term(seed: u64) -> Term {
    common::term(&mut ChaCha8Rng::seed_from_u64(seed), 4)
}

/// `t` after one random legal step, if any applies.
fn neighbour(t: &Term, rng: &mut ChaCha8Rng) -> Option<Term> {
    let fill = common::term(rng, 1);
    let step = common::applicable_steps(t, &fill).choose(rng)?.clone();
    Some(apply_axiom(t, &step).expect("matched steps apply"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn steps_preserve_values(seed in any::<u64>()) {
        let t = term(seed);
        let (_, tr) = normal_form(&t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut cur = tr.start.clone();
        for step in &tr.steps {
            let next = apply_axiom(&cur, step).unwrap();
            for _ in 0..10 {
                let a = common::random_assignment(&mut rng, &common::ATOMS, 5);
                match (eval(&cur, &a), eval(&next, &a)) {
                    (Ok(x), Ok(y)) => assert_eq!(x, y, "{:?} at {}", step.axiom, step.path),
                    (Err(Error::Overflow(_)), _) | (_, Err(Error::Overflow(_))) => {}
                    (x, y) => panic!("{x:?} {y:?}"),
                }
            }
            cur = next;
        }
    }

    #[test]
    fn traces_replay_to_the_printed_normal_form(seed in any::<u64>()) {
        let (n, tr) = normal_form(&term(seed)).unwrap();
        let end = replay(&tr).unwrap();
        prop_assert_eq!(print_term(&end), print_term(&n.to_term()));
        prop_assert_eq!(replay(&tr.reversed()).unwrap(), tr.start.clone());
    }

    #[test]
    fn derivable_pairs_have_no_counterexample(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = common::term(&mut rng, 3);
        let mut u = t.clone();
        for _ in 0..3 {
            if let Some(v) = neighbour(&u, &mut rng) {
                u = v;
            }
        }
        if let Some(tr) = prove_equal(&t, &u).unwrap() {
            replay(&tr).unwrap();
            let budget = SearchBudget { max_value: 3, ..SearchBudget::default() };
            match search_counterexample(&from_term(&t), &from_term(&u), &budget) {
                Ok(v) => assert!(!matches!(v, Verdict::Counterexample { .. }), "{v:?}"),
                Err(Error::Overflow(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn normalization_is_deterministic(seed in any::<u64>()) {
        let t = term(seed);
        prop_assert_eq!(normal_form(&t).unwrap(), normal_form(&t).unwrap());
    }
}

#[test]
fn single_steps_keep_the_normal_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cases = 0;
    while cases < 500 {
        let t = common::term(&mut rng, 4);
        let Some(u) = neighbour(&t, &mut rng) else { continue };
        cases += 1;
        assert_eq!(
            normal_form(&t).unwrap().0,
            normal_form(&u).unwrap().0,
            "{} vs {}",
            print_term(&t),
            print_term(&u)
        );
    }
}

#[test]
fn tampered_traces_fail_at_the_step() {
    let (_, mut tr) = normal_form(&parse_term("c ^ (a + b) * d").unwrap()).unwrap();
    assert!(tr.steps.len() >= 2);
    tr.steps[1].path = tr.steps[1].path.child(7);
    match replay(&tr) {
        Err(Error::StepMismatch { index, .. }) => assert_eq!(index, 1),
        other => panic!("{other:?}"),
    }
    let trace = RewriteTrace::empty(parse_term("a").unwrap());
    assert_eq!(replay(&trace).unwrap(), parse_term("a").unwrap());
}

#[test]
fn traces_survive_json() {
    let t = parse_term("(a + a) ^ d").unwrap();
    let (n, tr) = normal_form(&t).unwrap();
    assert_eq!(print_term(&n.to_term()), "(1 + 1) ^ d * a ^ d");
    let back = RewriteTrace::from_json(&serde_json::from_str(&tr.to_json().to_string()).unwrap()).unwrap();
    assert_eq!(back, tr);
    assert!(tr.steps.iter().any(|s| s.axiom == AxiomId::PowMulBase && s.dir == Direction::LR));
}

/// Known gap: a power whose base is a product of sums is expanded before
/// the exponent can absorb the repetition, so the two readings below end in
/// different normal forms although they are equal numbers.
#[test]
fn repeated_sum_bases_are_not_merged() {
    let l = parse_term("(a + b) ^ c * (a + b) ^ c").unwrap();
    let r = parse_term("((a + b) * (a + b)) ^ c").unwrap();
    assert!(prove_equal(&l, &r).unwrap().is_none());
    for a in common::grid(&["a".into(), "b".into(), "c".into()], 3) {
        assert_eq!(eval(&l, &a).unwrap(), eval(&r, &a).unwrap());
    }
}
