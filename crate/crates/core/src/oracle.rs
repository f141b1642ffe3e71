//! Brute-force reference implementations written directly from the
//! definitions, for differential testing of the engines.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::automaton::{LassoWord, Letter, Nmda, Run, State};
use crate::error::{Error, Result};
use crate::games::Dpg;
use crate::rational::Rational;

/// The longest word [`enumerate_runs`] accepts.
pub const MAX_RUN_LENGTH: usize = 12;

/// The most policies [`brute_dpg`] enumerates.
pub const MAX_POLICIES: u64 = 1_000_000;

/// Every run of `a` on `u` with its value.
pub fn enumerate_runs(a: &Nmda, u: &[Letter]) -> Result<Vec<(Run, Rational)>> {
    if u.len() > MAX_RUN_LENGTH {
        return Err(Error::BudgetExceeded(format!(
            "run enumeration is limited to words of length {MAX_RUN_LENGTH}"
        )));
    }
    a.check_word(u)?;
    let mut runs = Vec::new();
    for &q in a.initial() {
        let mut path = Vec::new();
        extend(a, u, q, &mut path, Rational::zero(), Rational::one(), q, &mut runs);
    }
    Ok(runs)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &Nmda,
    u: &[Letter],
    q: State,
    path: &mut Vec<usize>,
    value: Rational,
    discount: Rational,
    start: State,
    runs: &mut Vec<(Run, Rational)>,
) {
    let Some((&l, rest)) = u.split_first() else {
        runs.push((Run { start, transitions: path.clone() }, value));
        return;
    };
    for &i in a.out(q, l) {
        let t = a.transition(i);
        path.push(i);
        extend(
            a,
            rest,
            t.target,
            path,
            &value + &t.weight / &discount,
            &discount * &t.discount,
            start,
            runs,
        );
        path.pop();
    }
}

/// The minimal value over runs of length `n` on the unrolled lasso, keyed by
/// end state and accumulated discount.
fn prefix_minimum(a: &Nmda, w: &LassoWord, n: usize) -> Rational {
    let mut frontier: HashMap<(State, Rational), Rational> = a
        .initial()
        .iter()
        .map(|&q| ((q, Rational::one()), Rational::zero()))
        .collect();
    for i in 0..n {
        let l = w.letter_at(i);
        let mut next: HashMap<(State, Rational), Rational> = HashMap::new();
        for ((q, disc), value) in &frontier {
            for &ti in a.out(*q, l) {
                let t = a.transition(ti);
                let v = value + &t.weight / disc;
                let key = (t.target, disc * &t.discount);
                match next.get(&key) {
                    Some(old) if *old <= v => {}
                    _ => {
                        next.insert(key, v);
                    }
                }
            }
        }
        frontier = next;
    }
    frontier.into_values().min().expect("complete automata have runs")
}

/// An interval of width below `2ε` that contains the value of the lasso.
///
/// The unrolling length `n` is the least one with `W / λ^n < ε`, where `λ`
/// is the smallest discount factor and `W = M·λ/(λ-1)` bounds the value of
/// any suffix for the largest absolute weight `M`.
pub fn lasso_value_approx(a: &Nmda, w: &LassoWord, epsilon: &Rational) -> Result<(Rational, Rational)> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidWalk("ε must be positive".into()));
    }
    a.check_word(&w.prefix)?;
    a.check_word(&w.cycle)?;
    let lambda = a
        .transitions()
        .iter()
        .map(|t| t.discount.clone())
        .min()
        .expect("complete automata have transitions");
    let max_weight = a
        .transitions()
        .iter()
        .map(|t| t.weight.abs())
        .max()
        .expect("complete automata have transitions");
    let mut tail = &max_weight * &lambda / (&lambda - Rational::one());
    let mut n = 0;
    while tail >= *epsilon {
        tail /= &lambda;
        n += 1;
    }
    let m = prefix_minimum(a, w, n);
    Ok((&m - &tail, &m + &tail))
}

/// The value of every vertex under a fixed positional policy, by walking the
/// play until it closes a cycle.
fn play_values(g: &Dpg, policy: &[usize]) -> Vec<Rational> {
    (0..g.num_vertices())
        .map(|start| {
            let mut seen = HashMap::new();
            let mut weights = Vec::new();
            let mut discounts = Vec::new();
            let mut v = start;
            while !seen.contains_key(&v) {
                seen.insert(v, weights.len());
                let e = &g.edges()[policy[v]];
                weights.push(e.weight.clone());
                discounts.push(e.discount.clone());
                v = e.target;
            }
            let k = seen[&v];
            let mut factor = Rational::one();
            let mut head = Rational::zero();
            for i in 0..k {
                head += &weights[i] * &factor;
                factor *= &discounts[i];
            }
            let mut cycle = Rational::zero();
            let mut cycle_factor = Rational::one();
            for i in k..weights.len() {
                cycle += &weights[i] * &cycle_factor;
                cycle_factor *= &discounts[i];
            }
            head + factor * cycle / (Rational::one() - cycle_factor)
        })
        .collect()
}

/// The minimal play value per vertex over all positional policies.
pub fn brute_dpg(g: &Dpg) -> Result<Vec<Rational>> {
    let n = g.num_vertices();
    let mut count: u64 = 1;
    for v in 0..n {
        count = count.saturating_mul(g.out(v).len() as u64);
        if count > MAX_POLICIES {
            return Err(Error::BudgetExceeded(format!("more than {MAX_POLICIES} policies")));
        }
    }
    let mut choice = vec![0usize; n];
    let mut best: Option<Vec<Rational>> = None;
    loop {
        let policy: Vec<usize> = (0..n).map(|v| g.out(v)[choice[v]]).collect();
        let values = play_values(g, &policy);
        best = Some(match best {
            None => values,
            Some(b) => b.into_iter().zip(values).map(|(x, y)| x.min(y)).collect(),
        });
        let mut v = 0;
        loop {
            if v == n {
                return Ok(best.expect("at least one policy"));
            }
            choice[v] += 1;
            if choice[v] < g.out(v).len() {
                break;
            }
            choice[v] = 0;
            v += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Alphabet;
    use crate::gen::fixtures::fixture;
    use crate::games::DpgEdge;
    use crate::rational::{int, ratio};

    #[test]
    fn fig7_runs_on_aa() {
        let a = fixture("fig7_nda").nmda();
        let mut values: Vec<Rational> = enumerate_runs(&a, &[0, 0]).unwrap().into_iter().map(|(_, v)| v).collect();
        values.sort();
        assert_eq!(values, [ratio(11, 2), int(6), ratio(13, 2)]);
    }

    #[test]
    fn deterministic_automata_have_one_run() {
        let a = fixture("fig7_dmda").nmda();
        assert_eq!(enumerate_runs(&a, &[0, 0, 0]).unwrap().len(), 1);
        assert!(enumerate_runs(&a, &[0; 13]).is_err());
    }

    #[test]
    fn fig2_runs_on_ab() {
        let a = fixture("fig2").nmda();
        let runs = enumerate_runs(&a, &[0, 1]).unwrap();
        assert_eq!(runs.len(), 2);
        for (run, _) in &runs {
            assert_eq!(run.word(&a), vec![0, 1]);
        }
    }

    #[test]
    fn approximation_brackets_fig3() {
        let a = fixture("fig3").nmda();
        let w = LassoWord::new(vec![], vec![1]).unwrap();
        let (lo, hi) = lasso_value_approx(&a, &w, &ratio(1, 100)).unwrap();
        assert!(lo <= ratio(1, 2) && ratio(1, 2) <= hi);
        assert!(&hi - &lo < ratio(1, 50));
    }

    #[test]
    fn zero_weights_give_zero() {
        let alphabet = Alphabet::new(["a"]).unwrap();
        let a = Nmda::new(
            alphabet,
            vec!["q".into()],
            vec![0],
            vec![crate::Transition { source: 0, letter: 0, target: 0, weight: int(0), discount: int(3) }],
        )
        .unwrap();
        let (lo, hi) = lasso_value_approx(&a, &LassoWord::new(vec![], vec![0]).unwrap(), &ratio(1, 10)).unwrap();
        assert_eq!((lo, hi), (int(0), int(0)));
    }

    fn edge(source: usize, target: usize, w: i64, d: Rational) -> DpgEdge {
        DpgEdge { source, target, weight: int(w), discount: d }
    }

    #[test]
    fn small_games() {
        let g = Dpg::new(vec!["v".into()], vec![edge(0, 0, 1, ratio(1, 2))]).unwrap();
        assert_eq!(brute_dpg(&g).unwrap(), [int(2)]);
        let g = Dpg::new(vec!["v".into()], vec![edge(0, 0, 1, ratio(1, 2)), edge(0, 0, 0, ratio(1, 2))]).unwrap();
        assert_eq!(brute_dpg(&g).unwrap(), [int(0)]);
    }
}
