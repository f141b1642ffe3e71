//! Transducers of the letter-oriented and time-oriented choice functions.

use crate::automaton::{Alphabet, ChoiceTransducer};
use crate::error::{Error, Result, Violation};

/// The one-state transducer whose factor on a step is `factors[letter]`.
pub fn letter_oriented(alphabet: &Alphabet, factors: &[u64]) -> Result<ChoiceTransducer> {
    if factors.len() != alphabet.len() {
        return Err(Error::AlphabetMismatch);
    }
    let row = factors.iter().map(|&f| (0, f)).collect();
    ChoiceTransducer::new(alphabet.clone(), vec!["s0".into()], 0, vec![row])
}

/// The cyclic transducer whose factor on step `i` (1-based) is
/// `period[(i - 1) % period.len()]`.
pub fn time_oriented(alphabet: &Alphabet, period: &[u64]) -> Result<ChoiceTransducer> {
    if period.is_empty() {
        return Err(Error::Invalid(vec![Violation::EmptyInitialSet]));
    }
    let n = period.len();
    let delta = period
        .iter()
        .enumerate()
        .map(|(i, &f)| vec![((i + 1) % n, f); alphabet.len()])
        .collect();
    let states = (0..n).map(|i| format!("s{i}")).collect();
    ChoiceTransducer::new(alphabet.clone(), states, 0, delta)
}
