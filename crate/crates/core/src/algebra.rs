//! Closure operations for automata that share one choice function: scaling,
//! negation, sum, difference, minimum and maximum, and constant automata.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use num_traits::{Signed, Zero};

use crate::automaton::{ChoiceTransducer, Dmda, Letter, Nmda, State, Transition};
use crate::decide::Witness;
use crate::determinize::determinize;
use crate::error::{Error, Result};
use crate::rational::{Ext, Rational};

/// Breadth-first parent and letter of every visited state pair.
type PairParents = HashMap<(State, State), Option<((State, State), Letter)>>;

fn same_alphabet(a: &Nmda, b: &Nmda) -> Result<()> {
    if a.alphabet() == b.alphabet() {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}

/// Multiplies every weight by a non-negative `m`.
pub fn scale(a: &Nmda, m: &Rational) -> Result<Nmda> {
    if m.is_negative() {
        return Err(Error::NegativeScalar);
    }
    Ok(a.map_weights(|w| w * m))
}

/// A deterministic automaton valued `−a(w)` on every word.
pub fn negate(a: &Nmda) -> Result<Dmda> {
    let d = determinize(a)?;
    Dmda::new(d.map_weights(|w| -w))
}

/// Checks that synchronized runs of `a` and `b` always pick the same
/// discount factor. The error carries a shortest separating word.
pub fn check_same_choice(a: &Nmda, b: &Nmda) -> Result<()> {
    same_alphabet(a, b)?;
    let mut parent: PairParents = HashMap::new();
    let mut queue = VecDeque::new();
    for &p in a.initial() {
        for &q in b.initial() {
            parent.insert((p, q), None);
            queue.push_back((p, q));
        }
    }
    while let Some((p, q)) = queue.pop_front() {
        for l in 0..a.alphabet().len() {
            for t1 in a.out_transitions(p, l) {
                for t2 in b.out_transitions(q, l) {
                    if t1.discount != t2.discount {
                        let mut word = vec![l];
                        let mut at = (p, q);
                        while let Some(Some((prev, letter))) = parent.get(&at) {
                            word.push(*letter);
                            at = *prev;
                        }
                        word.reverse();
                        return Err(Error::IncompatibleChoiceFunctions {
                            witness: Witness::Finite(word).render(a.alphabet()),
                        });
                    }
                    let next = (t1.target, t2.target);
                    if let Entry::Vacant(e) = parent.entry(next) {
                        e.insert(Some(((p, q), l)));
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(())
}

/// An automaton valued `a(w) + b(w)`: the reachable part of the synchronized
/// product with summed weights.
pub fn add(a: &Nmda, b: &Nmda) -> Result<Nmda> {
    check_same_choice(a, b)?;
    let mut index: HashMap<(State, State), usize> = HashMap::new();
    let mut pairs = Vec::new();
    for &p in a.initial() {
        for &q in b.initial() {
            index.insert((p, q), pairs.len());
            pairs.push((p, q));
        }
    }
    let initial: Vec<State> = (0..pairs.len()).collect();
    let mut transitions = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for l in 0..a.alphabet().len() {
            for t1 in a.out_transitions(p, l) {
                for t2 in b.out_transitions(q, l) {
                    let key = (t1.target, t2.target);
                    let target = *index.entry(key).or_insert_with(|| {
                        pairs.push(key);
                        pairs.len() - 1
                    });
                    transitions.push(Transition {
                        source: i,
                        letter: l,
                        target,
                        weight: &t1.weight + &t2.weight,
                        discount: t1.discount.clone(),
                    });
                }
            }
        }
        i += 1;
    }
    let names = pairs
        .iter()
        .map(|&(p, q)| format!("({},{})", a.state_name(p), b.state_name(q)))
        .collect();
    Nmda::new(a.alphabet().clone(), names, initial, transitions)
}

/// An automaton valued `a(w) − b(w)`.
pub fn subtract(a: &Nmda, b: &Nmda) -> Result<Nmda> {
    check_same_choice(a, b)?;
    add(a, negate(b)?.as_nmda())
}

/// The disjoint union of `a` and `b` without the choice-function check;
/// valued `min(a(w), b(w))`.
pub fn disjoint_union(a: &Nmda, b: &Nmda) -> Result<Nmda> {
    same_alphabet(a, b)?;
    let offset = a.num_states();
    let names = a
        .states()
        .iter()
        .map(|s| format!("A.{s}"))
        .chain(b.states().iter().map(|s| format!("B.{s}")))
        .collect();
    let initial = a
        .initial()
        .iter()
        .copied()
        .chain(b.initial().iter().map(|q| q + offset))
        .collect();
    let transitions = a
        .transitions()
        .iter()
        .cloned()
        .chain(b.transitions().iter().map(|t| Transition {
            source: t.source + offset,
            target: t.target + offset,
            ..t.clone()
        }))
        .collect();
    Nmda::new(a.alphabet().clone(), names, initial, transitions)
}

/// An automaton valued `min(a(w), b(w))`, for automata sharing a choice function.
pub fn min_union(a: &Nmda, b: &Nmda) -> Result<Nmda> {
    check_same_choice(a, b)?;
    disjoint_union(a, b)
}

/// A deterministic automaton valued `max(a(w), b(w))`.
///
/// Both inputs are determinized and negated; the minimum of the two negated
/// automata is determinized by tracking the pair of states and the gap
/// between their runs, and the result is negated back.
pub fn max(a: &Nmda, b: &Nmda) -> Result<Dmda> {
    check_same_choice(a, b)?;
    let da = negate(a)?;
    let db = negate(b)?;
    let weights = da.transitions().iter().chain(db.transitions()).map(|t| &t.weight);
    let (lo, hi) = weights.fold(None, |acc: Option<(&Rational, &Rational)>, w| match acc {
        None => Some((w, w)),
        Some((lo, hi)) => Some((if w < lo { w } else { lo }, if w > hi { w } else { hi })),
    })
    .expect("complete automata have transitions");
    let two_t = (hi - lo) * Rational::from_integer(2.into());

    type Pair = (State, State, Ext, Ext);
    let start: Pair = (da.initial_state(), db.initial_state(), Ext::zero(), Ext::zero());
    let mut index: HashMap<Pair, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut transitions = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (q1, q2, g1, g2) = states[i].clone();
        for l in 0..da.alphabet().len() {
            let t1 = da.next(q1, l);
            let t2 = db.next(q2, l);
            let c1 = &g1 + &t1.weight;
            let c2 = &g2 + &t2.weight;
            let weight = c1.clone().min(c2.clone());
            let Ext::Finite(weight) = weight else {
                unreachable!("one gap is always zero")
            };
            let factor = &t1.discount;
            let gap = |c: Ext| match c {
                Ext::Finite(v) => {
                    let x = factor * (v - &weight);
                    if x > two_t {
                        Ext::Infinite
                    } else {
                        Ext::Finite(x)
                    }
                }
                Ext::Infinite => Ext::Infinite,
            };
            let key: Pair = (t1.target, t2.target, gap(c1), gap(c2));
            let target = *index.entry(key.clone()).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            transitions.push(Transition {
                source: i,
                letter: l,
                target,
                weight: -weight,
                discount: factor.clone(),
            });
        }
        i += 1;
    }
    let names = states
        .iter()
        .map(|(q1, q2, g1, g2)| {
            format!("({},{},{g1},{g2})", da.state_name(*q1), db.state_name(*q2))
        })
        .collect();
    Dmda::new(Nmda::new(da.alphabet().clone(), names, vec![0], transitions)?)
}

/// `max` through double determinization of the negated union; used to
/// cross-check the pairwise construction.
pub fn max_naive(a: &Nmda, b: &Nmda) -> Result<Dmda> {
    check_same_choice(a, b)?;
    let union = disjoint_union(negate(a)?.as_nmda(), negate(b)?.as_nmda())?;
    negate(&union)
}

/// A deterministic automaton following `theta` and valuing every nonempty
/// word at `nu`: the first transition weighs `nu` and all later ones `0`.
pub fn const_automaton(theta: &ChoiceTransducer, nu: &Rational) -> Dmda {
    let offset = 1;
    let mut names = vec!["start".to_string()];
    names.extend(theta.states().iter().map(|s| format!("t.{s}")));
    let mut transitions = Vec::new();
    for l in 0..theta.alphabet().len() {
        let (next, out) = theta.step(theta.initial(), l);
        transitions.push(Transition {
            source: 0,
            letter: l,
            target: next + offset,
            weight: nu.clone(),
            discount: Rational::from_integer(out.into()),
        });
    }
    for s in 0..theta.num_states() {
        for l in 0..theta.alphabet().len() {
            let (next, out) = theta.step(s, l);
            transitions.push(Transition {
                source: s + offset,
                letter: l,
                target: next + offset,
                weight: Rational::zero(),
                discount: Rational::from_integer(out.into()),
            });
        }
    }
    let a = Nmda::new(theta.alphabet().clone(), names, vec![0], transitions)
        .expect("constant automaton is well formed");
    Dmda::new(a).expect("constant automaton is deterministic")
}
