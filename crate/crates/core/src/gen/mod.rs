//! Generators for test corpora: the figure fixtures, NFA embeddings and
//! hardness gadgets, the counter-machine reduction, subfamily transducers and
//! seeded random instances.

pub mod counter;
pub mod fixtures;
pub mod nfa;
pub mod random;
pub mod subfamilies;

use std::collections::HashMap;

use crate::automaton::{Alphabet, Letter, Nmda, State, Transition};
use crate::error::Result;
use crate::rational::Rational;

/// Collects named states and transitions before validation.
pub(crate) struct Builder {
    alphabet: Alphabet,
    states: Vec<String>,
    index: HashMap<String, State>,
    initial: Vec<State>,
    transitions: Vec<Transition>,
}

impl Builder {
    pub(crate) fn new(alphabet: Alphabet) -> Self {
        Builder {
            alphabet,
            states: Vec::new(),
            index: HashMap::new(),
            initial: Vec::new(),
            transitions: Vec::new(),
        }
    }

    pub(crate) fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub(crate) fn state(&mut self, name: &str) -> State {
        if let Some(&q) = self.index.get(name) {
            return q;
        }
        self.states.push(name.to_string());
        self.index.insert(name.to_string(), self.states.len() - 1);
        self.states.len() - 1
    }

    pub(crate) fn initial(&mut self, name: &str) -> State {
        let q = self.state(name);
        self.initial.push(q);
        q
    }

    pub(crate) fn add(&mut self, source: &str, letter: Letter, target: &str, weight: Rational, discount: Rational) {
        let source = self.state(source);
        let target = self.state(target);
        self.transitions.push(Transition { source, letter, target, weight, discount });
    }

    pub(crate) fn build(self) -> Result<Nmda> {
        Nmda::new(self.alphabet, self.states, self.initial, self.transitions)
    }
}
