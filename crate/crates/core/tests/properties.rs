//! Property tests for the invariants of evaluation, tidiness,
//! determinization, the closure operations, games and the text formats.

use nmda::algebra::{scale, subtract};
use nmda::cli::format::{parse_nmda, write_nmda};
use nmda::decide::{nonempty, witness_value, Relation, Witness, WordMode};
use nmda::determinize::determinize;
use nmda::eval::{gap, lasso_value, value_bound, walk_value, word_value};
use nmda::games::{evaluate_policy, lasso_value_dpg, solve_min_dpg};
use nmda::gen::random::{self, letters};
use nmda::oracle::enumerate_runs;
use nmda::rational::{fmt_rational, int, parse_rational, ratio};
use nmda::tidy::{choice_transducer_of, is_compliant, is_tidy};
use nmda::{Alphabet, Ext, LassoWord, Nmda, Rational, Run, Transition};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(128)
}

fn word(max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..2usize, 1..=max_len)
}

fn lasso() -> impl Strategy<Value = LassoWord> {
    (prop::collection::vec(0..2usize, 0..=3), word(3)).prop_map(|(p, c)| LassoWord::new(p, c).unwrap())
}

/// A chain `s0 → s1 → … → sn` over one letter whose `i`-th transition has
/// discount `λ_i` and weight `(λ_i − 1)/λ_i`, closed by a zero loop.
fn telescoping_chain(factors: &[u64]) -> Nmda {
    let n = factors.len();
    let mut transitions: Vec<Transition> = factors
        .iter()
        .enumerate()
        .map(|(i, &f)| Transition {
            source: i,
            letter: 0,
            target: i + 1,
            weight: ratio(f as i64 - 1, f as i64),
            discount: int(f as i64),
        })
        .collect();
    transitions.push(Transition { source: n, letter: 0, target: n, weight: int(0), discount: int(2) });
    let states = (0..=n).map(|i| format!("s{i}")).collect();
    Nmda::new(Alphabet::new(["a"]).unwrap(), states, vec![0], transitions).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn telescoping_walk_value(factors in prop::collection::vec(2u64..=6, 0..8)) {
        let a = telescoping_chain(&factors);
        let walk = Run { start: 0, transitions: (0..factors.len()).collect() };
        let product: Rational = factors.iter().map(|&f| int(f as i64)).product();
        prop_assert_eq!(walk_value(&a, &walk).unwrap(), Rational::one() - product.recip());
    }

    #[test]
    fn word_value_is_the_minimal_run(seed in any::<u64>(), u in word(6)) {
        let mut rng = random::rng(seed);
        let a = random::integral_nmda(&mut rng, &letters(2), 3, &[2, 3, 4]);
        let runs = enumerate_runs(&a, &u).unwrap();
        for (run, v) in &runs {
            prop_assert_eq!(&walk_value(&a, run).unwrap(), v);
        }
        let least = runs.into_iter().map(|(_, v)| v).min().unwrap();
        prop_assert_eq!(word_value(&a, &u).unwrap(), least);
    }

    #[test]
    fn gaps_are_non_negative_and_some_gap_is_zero(seed in any::<u64>(), u in word(6)) {
        let a = random::tidy_instance(&mut random::rng(seed));
        let gaps: Vec<Ext> = (0..a.num_states()).map(|q| gap(&a, q, &u).unwrap()).collect();
        prop_assert!(gaps.iter().all(|g| g.finite().is_none_or(|x| *x >= Rational::zero())));
        prop_assert!(gaps.iter().any(Ext::is_zero));
    }

    #[test]
    fn scaling_scales_values(seed in any::<u64>(), m in 0i64..6, den in 1i64..4, u in word(5)) {
        let a = random::integral_nmda(&mut random::rng(seed), &letters(2), 3, &[2, 3]);
        let m = ratio(m, den);
        let scaled = scale(&a, &m).unwrap();
        prop_assert_eq!(word_value(&scaled, &u).unwrap(), &m * word_value(&a, &u).unwrap());
    }

    #[test]
    fn tidiness_is_compliance_with_the_own_transducer(seed in any::<u64>()) {
        let a = random::integral_nmda(&mut random::rng(seed), &letters(2), 3, &[2, 3]);
        let tidy = is_tidy(&a);
        match choice_transducer_of(&a) {
            Ok(t) => {
                prop_assert!(tidy.holds);
                prop_assert!(is_compliant(&a, &t).unwrap().holds);
            }
            Err(_) => prop_assert!(!tidy.holds),
        }
        if let Some(Witness::Finite(u)) = tidy.witness {
            let last: Vec<Rational> = enumerate_runs(&a, &u)
                .unwrap()
                .into_iter()
                .map(|(run, _)| a.transition(*run.transitions.last().unwrap()).discount.clone())
                .collect();
            prop_assert!(last.iter().any(|d| *d != last[0]));
        }
    }

    #[test]
    fn tidy_runs_share_their_last_discount(seed in any::<u64>(), u in word(6)) {
        let a = random::tidy_instance(&mut random::rng(seed));
        let runs = enumerate_runs(&a, &u).unwrap();
        let last = |run: &Run| a.transition(*run.transitions.last().unwrap()).discount.clone();
        let first = last(&runs[0].0);
        prop_assert!(runs.iter().all(|(run, _)| last(run) == first));
    }

    #[test]
    fn determinization_preserves_values(seed in any::<u64>(), u in word(6), w in lasso()) {
        let a = random::tidy_instance(&mut random::rng(seed));
        let d = determinize(&a).unwrap();
        prop_assert_eq!(word_value(&d, &u).unwrap(), word_value(&a, &u).unwrap());
        prop_assert_eq!(lasso_value(&d, &w).unwrap(), lasso_value(&a, &w).unwrap());
    }

    #[test]
    fn lasso_values_match_the_game_and_the_approximation(seed in any::<u64>(), w in lasso()) {
        let a = random::tidy_instance(&mut random::rng(seed));
        let v = lasso_value(&a, &w).unwrap();
        prop_assert_eq!(&v, &lasso_value_dpg(&a, &w).unwrap());
        prop_assert_eq!(&v, &lasso_value(&a, &w.normalized()).unwrap());
        let (lo, hi) = nmda::oracle::lasso_value_approx(&a, &w, &ratio(1, 64)).unwrap();
        prop_assert!(lo <= v && v <= hi);
    }

    #[test]
    fn finite_prefixes_bound_lasso_values(seed in any::<u64>(), w in lasso(), n in 1usize..8) {
        let a = random::tidy_instance(&mut random::rng(seed));
        let prefix = w.unroll(n);
        let rho: Rational = {
            let t = choice_transducer_of(&a).unwrap();
            Rational::from_integer(t.accumulated(&prefix))
        };
        let slack = int(2) * value_bound(&a) / rho;
        let diff = lasso_value(&a, &w).unwrap() - word_value(&a, &prefix).unwrap();
        prop_assert!(diff.clone() <= slack.clone() && -diff <= slack);
    }

    #[test]
    fn self_difference_is_zero(seed in any::<u64>(), u in word(5)) {
        let a = random::tidy_instance(&mut random::rng(seed));
        let zero = subtract(&a, &a).unwrap();
        prop_assert_eq!(word_value(&zero, &u).unwrap(), Rational::zero());
    }

    #[test]
    fn policy_iteration_is_optimal(seed in any::<u64>()) {
        let g = random::game(&mut random::rng(seed), 5, 3);
        let best = solve_min_dpg(&g);
        prop_assert_eq!(evaluate_policy(&g, &best.policy), best.values.clone());
        let mut rng = random::rng(seed ^ 1);
        for _ in 0..8 {
            let policy: Vec<usize> = (0..g.num_vertices())
                .map(|v| g.out(v)[rand::Rng::random_range(&mut rng, 0..g.out(v).len())])
                .collect();
            let values = evaluate_policy(&g, &policy);
            prop_assert!(values.iter().zip(&best.values).all(|(x, y)| x >= y));
        }
    }

    #[test]
    fn nonemptiness_witnesses_verify(seed in any::<u64>(), k in -8i64..=8) {
        let a = random::tidy_instance(&mut random::rng(seed));
        let nu = ratio(k, 4);
        for rel in [Relation::Lt, Relation::Le] {
            for mode in [WordMode::Finite, WordMode::Infinite] {
                let v = nonempty(&a, &nu, rel, mode).unwrap();
                if let Some(w) = &v.witness {
                    prop_assert!(v.holds);
                    prop_assert!(rel.holds(&witness_value(&a, w).unwrap(), &nu));
                }
            }
        }
    }

    #[test]
    fn automata_round_trip_through_text(seed in any::<u64>()) {
        let a = random::integral_nmda(&mut random::rng(seed), &letters(2), 4, &[2, 3, 5]);
        prop_assert_eq!(parse_nmda(&write_nmda(&a, "NMDA")).unwrap(), a);
    }

    #[test]
    fn rationals_round_trip(n in any::<i64>(), d in 1i64..1_000_000) {
        let v = ratio(n, d);
        prop_assert_eq!(parse_rational(&fmt_rational(&v)).unwrap(), v);
    }

    #[test]
    fn negated_relations_are_complements(x in -20i64..20, y in -20i64..20) {
        for rel in [Relation::Lt, Relation::Le, Relation::Gt, Relation::Ge] {
            let (x, y) = (int(x), int(y));
            prop_assert_ne!(rel.holds(&x, &y), rel.negated().holds(&x, &y));
        }
    }
}
