//! Worked examples on the bundled figures, one test per operation.

use nmda::algebra::{add, const_automaton, max, min_union, negate, scale, subtract};
use nmda::decide::{
    contain, dmda_contain, equivalent, exact_value, nonempty, universal, witness_value, Relation,
    Witness, WordMode,
};
use nmda::determinize::{det_step, determinize, DetContext, GapConfig};
use nmda::eval::{accumulated_discount, cost, gap, lasso_value, value_bound, walk_value, word_value};
use nmda::games::{lasso_value_dpg, lp_maximize, solve_min_dpg, Cmp, Dpg, LinearProgram, LpOutcome};
use nmda::gen::fixtures::fixture;
use nmda::gen::nfa::{hardness_gadget, GadgetKind};
use nmda::gen::random;
use nmda::gen::subfamilies::{letter_oriented, time_oriented};
use nmda::oracle::brute_dpg;
use nmda::rational::{int, ratio};
use nmda::tidy::{choice_transducer_of, is_compliant, is_tidy};
use nmda::{Alphabet, Error, Ext, LassoWord, Nfa, Nmda, Rational, Run, Transition, Violation};
use num_traits::Zero;

fn word(a: &Nmda, text: &str) -> Vec<usize> {
    a.alphabet().parse_word(text).unwrap()
}

fn lasso(a: &Nmda, text: &str) -> LassoWord {
    a.alphabet().parse_lasso(text).unwrap()
}

fn one_loop(weight: i64, discount: i64) -> Nmda {
    Nmda::new(
        Alphabet::new(["a"]).unwrap(),
        vec!["q".into()],
        vec![0],
        vec![Transition { source: 0, letter: 0, target: 0, weight: int(weight), discount: int(discount) }],
    )
    .unwrap()
}

#[test]
fn validation_rejects_incomplete_and_non_discounting_automata() {
    let alphabet = Alphabet::new(["a", "b"]).unwrap();
    let t = |letter, discount| Transition { source: 0, letter, target: 0, weight: int(0), discount };
    let err = Nmda::new(alphabet.clone(), vec!["q".into()], vec![0], vec![t(0, int(2))]).unwrap_err();
    assert!(matches!(err, Error::Invalid(v) if v.iter().any(|v| matches!(v, Violation::IncompleteAutomaton { .. }))));
    let err = Nmda::new(alphabet, vec!["q".into()], vec![0], vec![t(0, int(2)), t(1, int(1))]).unwrap_err();
    assert!(matches!(err, Error::Invalid(v) if v.iter().any(|v| matches!(v, Violation::DiscountNotGreaterThanOne { .. }))));
    assert_eq!(fixture("fig2").nmda().transitions().len(), 8);
}

#[test]
fn structural_measures() {
    let fig2 = fixture("fig2").nmda();
    let fig7 = fixture("fig7_nda").nmda();
    assert!(fig2.is_integral() && fixture("fig8").nmda().is_integral());
    assert_eq!(fig2.weight_denominator(), 4.into());
    assert_eq!(fig7.weight_denominator(), 1.into());
    assert_eq!(fig2.max_weight_difference(), ratio(7, 4));
    assert_eq!(fig7.max_weight_difference(), int(4));
    assert_eq!(one_loop(3, 2).max_weight_difference(), int(0));
}

#[test]
fn walk_and_word_values() {
    let fig2 = fixture("fig2").nmda();
    let index = |src: &str, l: &str, dst: &str| {
        let (s, l, d) = (
            fig2.state_index(src).unwrap(),
            fig2.alphabet().index_of(l).unwrap(),
            fig2.state_index(dst).unwrap(),
        );
        fig2.out(s, l).iter().copied().find(|&i| fig2.transition(i).target == d).unwrap()
    };
    let r1 = Run { start: 0, transitions: vec![index("q0", "a", "q0"), index("q0", "a", "q1"), index("q1", "b", "q2")] };
    assert_eq!(walk_value(&fig2, &r1).unwrap(), ratio(3, 2));
    assert_eq!(walk_value(&fig2, &Run { start: 0, transitions: vec![] }).unwrap(), int(0));

    let fig7 = fixture("fig7_nda").nmda();
    assert_eq!(word_value(&fig7, &word(&fig7, "a")).unwrap(), int(4));
    assert_eq!(word_value(&fig7, &word(&fig7, "aa")).unwrap(), ratio(11, 2));
    assert_eq!(word_value(&fig7, &[]).unwrap(), int(0));
    let fig3 = fixture("fig3").nmda();
    assert_eq!(word_value(&fig3, &word(&fig3, "a")).unwrap(), ratio(1, 2));
}

#[test]
fn costs_gaps_and_discounts() {
    let fig7 = fixture("fig7_nda").nmda();
    let (q1, q2) = (0, 1);
    assert_eq!(cost(&fig7, q2, &word(&fig7, "a")).unwrap(), Ext::Finite(int(5)));
    assert_eq!(cost(&fig7, q2, &word(&fig7, "aa")).unwrap(), Ext::Finite(ratio(11, 2)));
    assert_eq!(cost(&fig7, q2, &[]).unwrap(), Ext::Infinite);
    assert_eq!(gap(&fig7, q2, &word(&fig7, "a")).unwrap(), Ext::Finite(int(2)));
    assert_eq!(gap(&fig7, q1, &word(&fig7, "a")).unwrap(), Ext::zero());
    assert_eq!(gap(&fig7, q1, &word(&fig7, "aaa")).unwrap(), Ext::Finite(int(10)));
    assert_eq!(accumulated_discount(&fig7, &word(&fig7, "aaa")).unwrap(), int(8));
    assert_eq!(accumulated_discount(&fig7, &[]).unwrap(), int(1));
    let fig9 = fixture("fig9").nmda();
    assert_eq!(accumulated_discount(&fig9, &word(&fig9, "ab")).unwrap(), int(6));
    assert!(matches!(gap(&fixture("fig2").nmda(), 0, &[0]), Err(Error::NotTidy { .. })));
}

#[test]
fn lasso_values_and_bounds() {
    let fig3 = fixture("fig3").nmda();
    assert_eq!(lasso_value_dpg(&fig3, &lasso(&fig3, "aaa:b")).unwrap(), ratio(15, 16));
    assert_eq!(lasso_value_dpg(&fig3, &lasso(&fig3, ":b")).unwrap(), ratio(1, 2));
    assert_eq!(lasso_value_dpg(&fig3, &lasso(&fig3, ":a")).unwrap(), int(1));
    assert!(matches!(lasso_value(&fig3, &lasso(&fig3, ":a")), Err(Error::NotTidy { .. })));
    assert_eq!(value_bound(&fig3), int(4));
    assert_eq!(value_bound(&one_loop(1, 2)), int(2));
    assert_eq!(value_bound(&one_loop(0, 3)), int(0));
    let fig7 = fixture("fig7_nda").nmda();
    assert_eq!(lasso_value(&fig7, &lasso(&fig7, ":a")).unwrap(), lasso_value_dpg(&fig7, &lasso(&fig7, ":a")).unwrap());
}

#[test]
fn tidiness_and_compliance() {
    let fig2 = fixture("fig2").nmda();
    let v = is_tidy(&fig2);
    assert!(!v.holds);
    assert_eq!(v.witness.unwrap().render(fig2.alphabet()), "a");
    assert!(is_tidy(&fixture("fig8").nmda()).holds);
    assert!(is_tidy(&fixture("fig4_a").nmda()).holds);
    let fig9 = fixture("fig9").nmda();
    assert!(is_compliant(&fig9, &fixture("fig13_transducer").transducer()).unwrap().holds);
    let fig8 = fixture("fig8").nmda();
    let constant = time_oriented(fig8.alphabet(), &[2]).unwrap();
    let v = is_compliant(&fig8, &constant).unwrap();
    assert!(!v.holds);
    assert_eq!(v.witness.unwrap().render(fig8.alphabet()), "a");
}

#[test]
fn choice_transducers() {
    let fig7 = fixture("fig7_nda").nmda();
    let t = choice_transducer_of(&fig7).unwrap();
    assert_eq!(t.num_states(), 1);
    assert_eq!(t.step(0, 0), (0, 2));
    let fig8 = fixture("fig8").nmda();
    let t = choice_transducer_of(&fig8).unwrap();
    assert_eq!(t.num_states(), 1);
    let (a, b) = (fig8.alphabet().index_of("a").unwrap(), fig8.alphabet().index_of("b").unwrap());
    assert_eq!((t.step(0, a).1, t.step(0, b).1), (3, 2));
    assert_eq!(t.to_raw(), letter_oriented(fig8.alphabet(), &[3, 2]).unwrap().to_raw());
}

#[test]
fn determinization_steps_of_fig7() {
    let fig7 = fixture("fig7_nda").nmda();
    let ctx = DetContext::new(&fig7).unwrap();
    let cfg = |g: &[Option<i64>]| GapConfig(g.iter().map(|x| x.map_or(Ext::Infinite, |v| Ext::Finite(int(v)))).collect());
    assert_eq!(ctx.initial_config(), cfg(&[Some(0), None]));
    assert_eq!(ctx.two_t, int(8));
    let (c, w, r) = det_step(&ctx, &cfg(&[Some(0), None]), 0).unwrap();
    assert_eq!((c.clone(), w, r), (cfg(&[Some(0), Some(2)]), int(4), int(2)));
    let (c, w, r) = det_step(&ctx, &c, 0).unwrap();
    assert_eq!((c.clone(), w, r), (cfg(&[Some(2), Some(0)]), int(3), int(2)));
    let (c, w, r) = det_step(&ctx, &c, 0).unwrap();
    assert_eq!((c, w, r), (cfg(&[None, Some(0)]), int(1), int(2)));

    let d = fixture("fig4_a").dmda();
    assert_eq!(determinize(&d).unwrap().num_states(), d.num_states());
}

#[test]
fn scaling_and_negation() {
    let fig3 = fixture("fig3").nmda();
    assert_eq!(scale(&fig3, &int(1)).unwrap(), fig3);
    let zero = scale(&fig3, &int(0)).unwrap();
    assert_eq!(word_value(&zero, &word(&fig3, "abc")).unwrap(), int(0));
    assert_eq!(lasso_value_dpg(&scale(&fig3, &int(2)).unwrap(), &lasso(&fig3, ":b")).unwrap(), int(1));
    assert_eq!(scale(&fig3, &int(-1)).unwrap_err(), Error::NegativeScalar);

    let fig7 = fixture("fig7_nda").nmda();
    assert_eq!(word_value(&negate(&fig7).unwrap(), &[0]).unwrap(), int(-4));
    let d = fixture("fig10_dmda").dmda();
    let twice = negate(&negate(&d).unwrap()).unwrap();
    let theta = choice_transducer_of(&d).unwrap();
    let minus = negate(&const_automaton(&theta, &ratio(1, 3))).unwrap();
    for u in d.alphabet().words_up_to(4) {
        assert_eq!(word_value(&twice, &u).unwrap(), word_value(&d, &u).unwrap());
        assert_eq!(word_value(&minus, &u).unwrap(), ratio(-1, 3));
    }
}

#[test]
fn sums_unions_and_maxima() {
    let d = fixture("fig10_dmda").dmda();
    let doubled = add(&d, &d).unwrap();
    let a = fixture("fig10_nda").nmda();
    let theta = choice_transducer_of(&a).unwrap();
    let (one, two) = (const_automaton(&theta, &int(1)), const_automaton(&theta, &int(2)));
    let low = min_union(&one, &two).unwrap();
    let high = max(&one, &two).unwrap();
    let same_low = min_union(&a, &a).unwrap();
    let same_high = max(&a, &a).unwrap();
    let zero = subtract(&a, &a).unwrap();
    for u in a.alphabet().words_up_to(5) {
        assert_eq!(word_value(&doubled, &u).unwrap(), int(2) * word_value(&d, &u).unwrap());
        assert_eq!(word_value(&low, &u).unwrap(), int(1));
        assert_eq!(word_value(&high, &u).unwrap(), int(2));
        assert_eq!(word_value(&same_low, &u).unwrap(), word_value(&a, &u).unwrap());
        assert_eq!(word_value(&same_high, &u).unwrap(), word_value(&a, &u).unwrap());
        assert_eq!(word_value(&zero, &u).unwrap(), int(0));
    }
    let (fa, fb) = (fixture("fig4_a").nmda(), fixture("fig4_b").nmda());
    let incompatible = Error::IncompatibleChoiceFunctions { witness: "a".into() };
    assert_eq!(add(&fa, &fb).unwrap_err(), incompatible);
    for n in 1..=6 {
        let w = LassoWord::new(vec![0; n], vec![1]).unwrap();
        let m = lasso_value(&fa, &w).unwrap().max(lasso_value(&fb, &w).unwrap());
        let base = if n % 2 == 1 { 2 } else { 3 };
        assert_eq!(m, ratio(1, (base as i64).pow(n as u32)));
    }
    let fig3 = fixture("fig3").nmda();
    assert_eq!(lasso_value_dpg(&fig3, &lasso(&fig3, "a:b")).unwrap(), ratio(3, 4));
}

#[test]
fn constants() {
    let a = fixture("fig10_nda").nmda();
    let theta = choice_transducer_of(&a).unwrap();
    let zero = const_automaton(&theta, &int(0));
    let half = const_automaton(&theta, &ratio(1, 2));
    for u in a.alphabet().words_up_to(4) {
        assert_eq!(word_value(&zero, &u).unwrap(), int(0));
    }
    assert_eq!(word_value(&half, &word(&a, "aba")).unwrap(), ratio(1, 2));
    let fig13 = fixture("fig13_transducer").transducer();
    let c = const_automaton(&fig13, &int(1));
    assert_eq!(accumulated_discount(&c, &word(&c, "ab")).unwrap(), int(6));
}

#[test]
fn games() {
    let fig2 = fixture("fig2").nmda();
    let g = Dpg::from_nmda(&fig2);
    assert_eq!((g.num_vertices(), g.edges().len()), (3, 8));
    assert_eq!(solve_min_dpg(&g).values, [int(1), int(1), ratio(1, 2)]);
    assert_eq!(brute_dpg(&g).unwrap(), [int(1), int(1), ratio(1, 2)]);
    let g = Dpg::from_nmda(&one_loop(1, 2));
    assert_eq!(g.edges()[0].discount, ratio(1, 2));
    assert_eq!(solve_min_dpg(&g).values, [int(2)]);
    let fig3 = fixture("fig3").nmda();
    assert_eq!(solve_min_dpg(&Dpg::from_nmda(&fig3)).values[0], ratio(1, 2));
}

#[test]
fn linear_programs() {
    let mut lp = LinearProgram::maximize_sum(1);
    lp.constrain(vec![int(1)], Cmp::Le, int(4));
    assert!(matches!(lp_maximize(&lp).unwrap(), LpOutcome::Optimal { x, .. } if x == [int(4)]));
    let mut lp = LinearProgram::maximize_sum(1);
    lp.constrain(vec![int(1)], Cmp::Le, int(-1));
    assert_eq!(lp_maximize(&lp).unwrap(), LpOutcome::Infeasible);
    let mut lp = LinearProgram::maximize_sum(1);
    lp.constrain(vec![int(1)], Cmp::Le, int(4));
    lp.constrain(vec![int(-1)], Cmp::Le, int(2));
    assert!(matches!(lp_maximize(&lp).unwrap(), LpOutcome::Optimal { x, .. } if x == [int(4)]));
}

#[test]
fn nonemptiness_examples() {
    let fig2 = fixture("fig2").nmda();
    let v = nonempty(&fig2, &int(1), Relation::Le, WordMode::Infinite).unwrap();
    assert!(v.holds);
    let w = v.witness.unwrap();
    assert_eq!(witness_value(&fig2, &w).unwrap(), int(1));
    assert!(!nonempty(&fig2, &int(1), Relation::Lt, WordMode::Infinite).unwrap().holds);
    let loop1 = one_loop(1, 2);
    assert!(!nonempty(&loop1, &int(-1), Relation::Le, WordMode::Finite).unwrap().holds);
    assert!(matches!(
        nonempty(&loop1, &int(0), Relation::Gt, WordMode::Finite),
        Err(Error::UnsupportedRelation(_))
    ));
}

#[test]
fn containment_and_equivalence_examples() {
    let fig7 = fixture("fig7_nda").nmda();
    let theta = choice_transducer_of(&fig7).unwrap();
    assert!(contain(&fig7, &fig7, Relation::Ge, WordMode::Finite).unwrap().holds);
    let shifted = add(&fig7, &const_automaton(&theta, &int(1))).unwrap();
    assert!(contain(&shifted, &fig7, Relation::Gt, WordMode::Finite).unwrap().holds);
    let v = contain(&const_automaton(&theta, &int(1)), &fig7, Relation::Gt, WordMode::Finite).unwrap();
    assert!(!v.holds);
    assert_eq!(v.witness, Some(Witness::Finite(vec![0])));
    assert!(equivalent(&fig7, &determinize(&fig7).unwrap(), WordMode::Finite).unwrap().holds);
    assert!(!equivalent(&fig7, &shifted, WordMode::Finite).unwrap().holds);

    let (a, b) = (fixture("fig5_a").nmda(), fixture("fig5_b").nmda());
    assert!(equivalent(&a, &b, WordMode::Infinite).unwrap().holds);
    let v = equivalent(&a, &b, WordMode::Finite).unwrap();
    assert!(!v.holds);
    let w = v.witness.unwrap();
    assert_eq!(w, Witness::Finite(vec![0]));
    assert_eq!((witness_value(&a, &w).unwrap(), witness_value(&b, &w).unwrap()), (int(1), int(2)));
}

#[test]
fn universality_and_exact_values() {
    let fig7 = fixture("fig7_nda").nmda();
    let theta = choice_transducer_of(&fig7).unwrap();
    let one = const_automaton(&theta, &int(1));
    assert!(universal(&one, &int(1), Relation::Le, WordMode::Finite).unwrap().holds);
    let v = universal(&one, &int(1), Relation::Lt, WordMode::Finite).unwrap();
    assert!(!v.holds && v.witness.is_some());
    assert!(!exact_value(&const_automaton(&theta, &int(0)), &int(1), WordMode::Finite).unwrap().holds);
    assert!(universal(&fixture("fig10_nda").nmda(), &int(5), Relation::Lt, WordMode::Finite).unwrap().holds);

    let full = Nfa::new(Alphabet::new(["a", "b"]).unwrap(), vec!["q".into()], vec![0], vec![0], vec![(0, 0, 0), (0, 1, 0)]).unwrap();
    let gadget = hardness_gadget(&full, GadgetKind::EqFinite).unwrap();
    assert!(universal(&gadget, &int(0), Relation::Le, WordMode::Finite).unwrap().holds);

    let just_a = Nfa::new(Alphabet::new(["a", "b"]).unwrap(), vec!["p".into(), "q".into()], vec![0], vec![1], vec![(0, 0, 1)]).unwrap();
    let gadget = hardness_gadget(&just_a, GadgetKind::ExactFinite).unwrap();
    let v = exact_value(&gadget, &ratio(-1, 2), WordMode::Finite).unwrap();
    assert!(v.holds);
    assert_eq!(v.witness, Some(Witness::Finite(vec![0])));
}

#[test]
fn deterministic_containment_agrees_with_the_general_procedure() {
    let mut rng = random::rng(11);
    let mut checked = 0;
    while checked < 50 {
        let (a, b, _) = random::same_choice_pair(&mut rng);
        let (Ok(da), Ok(db)) = (determinize(&a), determinize(&b)) else { continue };
        for mode in [WordMode::Finite, WordMode::Infinite] {
            for rel in [Relation::Gt, Relation::Ge] {
                let fast = dmda_contain(&da, &db, rel, mode).unwrap();
                let general = contain(&da, &db, rel, mode).unwrap();
                assert_eq!(fast.holds, general.holds, "{mode} {rel}");
                if let Some(w) = fast.witness {
                    let (x, y) = (witness_value(&da, &w).unwrap(), witness_value(&db, &w).unwrap());
                    assert!(!rel.holds(&x, &y));
                }
            }
        }
        checked += 1;
    }
    let d = fixture("fig10_dmda").dmda();
    assert!(dmda_contain(&d, &d, Relation::Ge, WordMode::Finite).unwrap().holds);
    let theta = choice_transducer_of(&d).unwrap();
    let (one, two) = (const_automaton(&theta, &int(1)), const_automaton(&theta, &int(2)));
    assert!(dmda_contain(&two, &one, Relation::Gt, WordMode::Infinite).unwrap().holds);
}

#[test]
fn subfamilies_and_fixtures() {
    let fig8 = fixture("fig8").nmda();
    let t = letter_oriented(fig8.alphabet(), &[3, 2]).unwrap();
    assert!(is_compliant(&fig8, &t).unwrap().holds);
    let period = time_oriented(&random::letters(2), &[2, 3]).unwrap();
    assert_eq!(period.to_raw(), fixture("fig13_transducer").transducer().to_raw());
    let constant = time_oriented(&random::letters(2), &[2]).unwrap();
    assert_eq!(constant.num_states(), 1);
    let fig3 = fixture("fig3").nmda();
    assert_eq!((fig3.num_states(), fig3.transitions().len()), (3, 9));
    let d = determinize(&fixture("fig7_nda").nmda()).unwrap();
    let expected = fixture("fig7_dmda").dmda();
    for u in d.alphabet().words_up_to(6) {
        assert_eq!(word_value(&d, &u).unwrap(), word_value(&expected, &u).unwrap());
    }
    assert!(Rational::zero() == word_value(&fig3, &[]).unwrap());
}
