//! Seeded random instances for differential and property testing.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{Alphabet, ChoiceTransducer, Nfa, Nmda, State, Transition};
use crate::games::{Dpg, DpgEdge};
use crate::rational::{int, ratio, Rational};

/// The generator used throughout the test suites.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The alphabet `a, b, ...` with `n` letters.
pub fn letters(n: usize) -> Alphabet {
    Alphabet::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string())).expect("at most 26 letters")
}

/// A weight `k/denominator` with `|k| <= max_numerator`.
pub fn weight(rng: &mut impl Rng, max_numerator: i64, denominator: i64) -> Rational {
    ratio(rng.random_range(-max_numerator..=max_numerator), denominator)
}

/// A complete transducer with `states` states whose outputs are drawn from
/// `factors`.
pub fn transducer(rng: &mut impl Rng, alphabet: &Alphabet, states: usize, factors: &[u64]) -> ChoiceTransducer {
    let delta = (0..states)
        .map(|_| {
            (0..alphabet.len())
                .map(|_| (rng.random_range(0..states), *factors.choose(rng).expect("nonempty factors")))
                .collect()
        })
        .collect();
    ChoiceTransducer::new(alphabet.clone(), (0..states).map(|i| format!("s{i}")).collect(), 0, delta)
        .expect("random transducer is well formed")
}

/// Shape parameters for [`tidy_nmda`].
#[derive(Clone, Copy, Debug)]
pub struct TidyShape {
    /// The largest number of states.
    pub max_states: usize,
    /// The largest number of transitions per state and letter.
    pub max_branching: usize,
    /// Weights are `k/denominator` with `|k| <= max_numerator`.
    pub max_numerator: i64,
    /// The common weight denominator.
    pub denominator: i64,
}

impl Default for TidyShape {
    fn default() -> Self {
        TidyShape { max_states: 4, max_branching: 2, max_numerator: 8, denominator: 4 }
    }
}

/// A complete automaton compliant with `t`: every state carries a transducer
/// state as its label, initial states carry the initial label, and every
/// transition follows the transducer's step.
pub fn tidy_nmda(rng: &mut impl Rng, t: &ChoiceTransducer, shape: TidyShape) -> Nmda {
    loop {
        let n = rng.random_range(1..=shape.max_states);
        let mut label: Vec<State> = (0..n).map(|_| rng.random_range(0..t.num_states())).collect();
        label[0] = t.initial();
        if let Some(a) = labelled(rng, t, &label, shape) {
            return a;
        }
    }
}

fn labelled(rng: &mut impl Rng, t: &ChoiceTransducer, label: &[State], shape: TidyShape) -> Option<Nmda> {
    let n = label.len();
    let mut transitions = Vec::new();
    for q in 0..n {
        for l in 0..t.alphabet().len() {
            let (next, factor) = t.step(label[q], l);
            let mut candidates: Vec<State> = (0..n).filter(|&p| label[p] == next).collect();
            if candidates.is_empty() {
                return None;
            }
            candidates.shuffle(rng);
            let k = rng.random_range(1..=shape.max_branching.min(candidates.len()));
            for &target in &candidates[..k] {
                transitions.push(Transition {
                    source: q,
                    letter: l,
                    target,
                    weight: weight(rng, shape.max_numerator, shape.denominator),
                    discount: int(factor as i64),
                });
            }
        }
    }
    let mut initial: Vec<State> = (0..n).filter(|&q| label[q] == t.initial()).collect();
    initial.shuffle(rng);
    initial.truncate(rng.random_range(1..=2.min(initial.len())));
    let states = (0..n).map(|q| format!("q{q}")).collect();
    Some(Nmda::new(t.alphabet().clone(), states, initial, transitions).expect("random automaton is valid"))
}

/// A random tidy automaton over two letters following a random two-state
/// transducer over the factors `{2, 3}`.
pub fn tidy_instance(rng: &mut impl Rng) -> Nmda {
    let t = transducer(rng, &letters(2), 2, &[2, 3]);
    tidy_nmda(rng, &t, TidyShape::default())
}

/// Two automata following the same random two-state transducer over the
/// factors `{2, 3}`, together with the transducer.
pub fn same_choice_pair(rng: &mut impl Rng) -> (Nmda, Nmda, ChoiceTransducer) {
    let t = transducer(rng, &letters(2), 2, &[2, 3]);
    let shape = TidyShape { max_states: 3, ..TidyShape::default() };
    let a = tidy_nmda(rng, &t, shape);
    let b = tidy_nmda(rng, &t, shape);
    (a, b, t)
}

/// A complete integral automaton with factors from `factors`, not
/// necessarily tidy.
pub fn integral_nmda(rng: &mut impl Rng, alphabet: &Alphabet, max_states: usize, factors: &[u64]) -> Nmda {
    let n = rng.random_range(1..=max_states);
    let mut transitions = Vec::new();
    for q in 0..n {
        for l in 0..alphabet.len() {
            let mut targets: Vec<State> = (0..n).collect();
            targets.shuffle(rng);
            let k = rng.random_range(1..=2.min(n));
            for &target in &targets[..k] {
                transitions.push(Transition {
                    source: q,
                    letter: l,
                    target,
                    weight: weight(rng, 8, 4),
                    discount: int(*factors.choose(rng).expect("nonempty factors") as i64),
                });
            }
        }
    }
    let mut initial: Vec<State> = (0..n).collect();
    initial.shuffle(rng);
    initial.truncate(rng.random_range(1..=2.min(n)));
    let states = (0..n).map(|q| format!("q{q}")).collect();
    Nmda::new(alphabet.clone(), states, initial, transitions).expect("random automaton is valid")
}

/// A random one-player game with at most `max_vertices` vertices and between
/// one and `max_out` out-edges per vertex.
pub fn game(rng: &mut impl Rng, max_vertices: usize, max_out: usize) -> Dpg {
    let n = rng.random_range(1..=max_vertices);
    let mut edges = Vec::new();
    for source in 0..n {
        for _ in 0..rng.random_range(1..=max_out) {
            let den = rng.random_range(2..=4);
            edges.push(DpgEdge {
                source,
                target: rng.random_range(0..n),
                weight: weight(rng, 8, 4),
                discount: ratio(rng.random_range(1..den), den),
            });
        }
    }
    Dpg::new((0..n).map(|v| format!("v{v}")).collect(), edges).expect("random game is valid")
}

/// A random NFA with at most `max_states` states; states may lack
/// transitions.
pub fn nfa(rng: &mut impl Rng, alphabet: &Alphabet, max_states: usize) -> Nfa {
    let n = rng.random_range(1..=max_states);
    let mut transitions = Vec::new();
    for p in 0..n {
        for l in 0..alphabet.len() {
            for q in 0..n {
                if rng.random_bool(0.35) {
                    transitions.push((p, l, q));
                }
            }
        }
    }
    let initial = (0..n).filter(|_| rng.random_bool(0.5)).chain([0]).collect();
    let accepting = (0..n).filter(|_| rng.random_bool(0.4)).collect();
    let states = (0..n).map(|q| format!("q{q}")).collect();
    Nfa::new(alphabet.clone(), states, initial, accepting, transitions).expect("random NFA is valid")
}
