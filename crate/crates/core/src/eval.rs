//! Exact values of walks, finite words and lasso words, together with the
//! cost, gap and accumulated-discount primitives.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::automaton::{LassoWord, Letter, Nmda, Run, State};
use crate::determinize::{det_step, DetContext, GapConfig};
use crate::error::{Error, Result};
use crate::rational::{Ext, Rational};
use crate::tidy;

/// Value of a finite walk: `Σ γ(t_i) / Π_{j<i} ρ(t_j)`.
pub fn walk_value(a: &Nmda, walk: &Run) -> Result<Rational> {
    if walk.start >= a.num_states() {
        return Err(Error::InvalidWalk(format!("unknown start state #{}", walk.start)));
    }
    let mut at = walk.start;
    let mut value = Rational::zero();
    let mut discount = Rational::one();
    for (i, &ti) in walk.transitions.iter().enumerate() {
        let t = a
            .transitions()
            .get(ti)
            .ok_or_else(|| Error::InvalidWalk(format!("unknown transition #{ti}")))?;
        if t.source != at {
            return Err(Error::InvalidWalk(format!(
                "step {i} leaves `{}` but the walk is in `{}`",
                a.state_name(t.source),
                a.state_name(at)
            )));
        }
        value += &t.weight / &discount;
        discount *= &t.discount;
        at = t.target;
    }
    Ok(value)
}

/// Minimal value per `(state, accumulated discount)` after reading `word`.
///
/// Runs that end in the same state with the same accumulated discount have
/// identical futures, so only the cheapest one is kept. For tidy automata the
/// discount component is unique per word.
fn frontier(a: &Nmda, word: &[Letter]) -> Result<HashMap<(State, Rational), Rational>> {
    a.check_word(word)?;
    let mut current: HashMap<(State, Rational), Rational> = a
        .initial()
        .iter()
        .map(|&q| ((q, Rational::one()), Rational::zero()))
        .collect();
    for &l in word {
        let mut next: HashMap<(State, Rational), Rational> = HashMap::new();
        for ((q, discount), value) in &current {
            for t in a.out_transitions(*q, l) {
                let v = value + &t.weight / discount;
                let key = (t.target, discount * &t.discount);
                match next.get_mut(&key) {
                    Some(best) if *best <= v => {}
                    Some(best) => *best = v,
                    None => {
                        next.insert(key, v);
                    }
                }
            }
        }
        current = next;
    }
    Ok(current)
}

/// Value of a finite word: the minimum over all runs. The empty word has value 0.
pub fn word_value(a: &Nmda, word: &[Letter]) -> Result<Rational> {
    Ok(frontier(a, word)?
        .into_values()
        .min()
        .expect("complete automata have a run on every word"))
}

/// Minimal value over the runs on `word` that end in `q`; `∞` when none does.
pub fn cost(a: &Nmda, q: State, word: &[Letter]) -> Result<Ext> {
    Ok(frontier(a, word)?
        .into_iter()
        .filter(|((p, _), _)| *p == q)
        .map(|(_, v)| Ext::Finite(v))
        .min()
        .unwrap_or(Ext::Infinite))
}

fn require_tidy(a: &Nmda) -> Result<()> {
    match tidy::is_tidy(a).witness {
        None => Ok(()),
        Some(w) => Err(Error::NotTidy {
            witness: w.render(a.alphabet()),
        }),
    }
}

/// Product of the discount factors chosen along `word` by a tidy automaton.
pub fn accumulated_discount(a: &Nmda, word: &[Letter]) -> Result<Rational> {
    require_tidy(a)?;
    a.check_word(word)?;
    Ok(discount_along(a, word))
}

/// Accumulated discount along an arbitrary run on `word`; meaningful for tidy automata.
fn discount_along(a: &Nmda, word: &[Letter]) -> Rational {
    let mut q = a.initial()[0];
    let mut discount = Rational::one();
    for &l in word {
        let t = a.out_transitions(q, l).next().expect("complete automaton");
        discount *= &t.discount;
        q = t.target;
    }
    discount
}

/// Gap of `q` over `word`: `ρ(word)·(cost(q, word) − A(word))`, or `∞`.
pub fn gap(a: &Nmda, q: State, word: &[Letter]) -> Result<Ext> {
    require_tidy(a)?;
    let front = frontier(a, word)?;
    let best = front.values().min().expect("nonempty frontier").clone();
    let discount = discount_along(a, word);
    Ok(front
        .into_iter()
        .filter(|((p, _), _)| *p == q)
        .map(|(_, v)| Ext::Finite((v - &best) * &discount))
        .min()
        .unwrap_or(Ext::Infinite))
}

/// `m·λ/(λ−1)` with `m` the largest absolute weight and `λ` the smallest
/// discount factor; bounds the absolute value of every word.
pub fn value_bound(a: &Nmda) -> Rational {
    let lambda = a.min_discount();
    a.max_abs_weight() * &lambda / (lambda - Rational::one())
}

/// Exact value of the lasso word `prefix·cycle^ω` on a tidy integral automaton.
///
/// The determinized configuration is tracked at every cycle boundary. Once a
/// configuration repeats, the remaining tail is a geometric series.
pub fn lasso_value(a: &Nmda, w: &LassoWord) -> Result<Rational> {
    a.check_word(&w.prefix)?;
    a.check_word(&w.cycle)?;
    let ctx = DetContext::new(a)?;
    let mut config = ctx.initial_config();
    let mut value = Rational::zero();
    let mut discount = Rational::one();
    let feed = |config: &mut GapConfig, value: &mut Rational, discount: &mut Rational, l| {
        let (next, weight, factor) = det_step(&ctx, config, l)?;
        *value += weight / &*discount;
        *discount *= factor;
        *config = next;
        Ok::<(), Error>(())
    };
    for &l in &w.prefix {
        feed(&mut config, &mut value, &mut discount, l)?;
    }
    let mut seen: HashMap<GapConfig, (Rational, Rational)> = HashMap::new();
    loop {
        if let Some((v1, p1)) = seen.get(&config) {
            let period = &discount / p1;
            let segment = &value - v1;
            return Ok(v1 + segment * &period / (period - Rational::one()));
        }
        seen.insert(config.clone(), (value.clone(), discount.clone()));
        for &l in &w.cycle {
            feed(&mut config, &mut value, &mut discount, l)?;
        }
    }
}
