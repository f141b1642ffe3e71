//! Alphabets, words, lasso words and the validated automaton, transducer and
//! NFA types.

use std::collections::{HashMap, HashSet};
use std::ops::Deref;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result, Violation};
use crate::rational::{fmt_rational, lcm_denominators, Rational};

/// Index of a letter in its alphabet.
pub type Letter = usize;
/// Index of a state in its automaton.
pub type State = usize;
/// A finite word as a sequence of letter indices.
pub type Word = Vec<Letter>;

fn valid_name(name: &str, letter: bool) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || c == '#' || (letter && (c == ',' || c == ':')))
}

/// A nonempty, ordered set of distinct letter names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<String>,
    index: HashMap<String, Letter>,
}

impl Alphabet {
    /// Builds an alphabet, rejecting empty, duplicate or malformed letters.
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        let mut violations = Vec::new();
        if letters.is_empty() {
            violations.push(Violation::EmptyAlphabet);
        }
        let mut index = HashMap::new();
        for (i, l) in letters.iter().enumerate() {
            if !valid_name(l, true) {
                violations.push(Violation::InvalidName(l.clone()));
            }
            if index.insert(l.clone(), i).is_some() {
                violations.push(Violation::DuplicateLetter(l.clone()));
            }
        }
        if violations.is_empty() {
            Ok(Alphabet { letters, index })
        } else {
            Err(Error::Invalid(violations))
        }
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Always false; alphabets are nonempty.
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter names in canonical order.
    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    /// Name of letter `l`.
    pub fn name(&self, l: Letter) -> &str {
        &self.letters[l]
    }

    /// Index of the letter called `name`.
    pub fn index_of(&self, name: &str) -> Option<Letter> {
        self.index.get(name).copied()
    }

    fn single_char(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }

    /// Parses a word. Letters are separated by whitespace or commas; without
    /// separators, a single-character alphabet reads one letter per character.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        let tokens: Vec<String> = if text.contains(|c: char| c.is_whitespace() || c == ',') {
            text.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(str::to_string)
                .collect()
        } else if self.single_char() {
            text.chars().map(|c| c.to_string()).collect()
        } else {
            vec![text.to_string()]
        };
        tokens
            .iter()
            .map(|t| self.index_of(t).ok_or_else(|| Error::UnknownLetter(t.clone())))
            .collect()
    }

    /// Renders a word; letters are concatenated for single-character
    /// alphabets and comma-separated otherwise.
    pub fn render_word(&self, word: &[Letter]) -> String {
        let names = word.iter().map(|&l| self.name(l));
        if self.single_char() {
            names.collect()
        } else {
            names.collect::<Vec<_>>().join(",")
        }
    }

    /// Parses a lasso word written `prefix:cycle`.
    pub fn parse_lasso(&self, text: &str) -> Result<LassoWord> {
        let (prefix, cycle) = text.split_once(':').ok_or(Error::Parse {
            line: 0,
            message: format!("lasso `{text}` must be written prefix:cycle"),
        })?;
        LassoWord::new(self.parse_word(prefix)?, self.parse_word(cycle)?)
    }

    /// Renders a lasso word as `prefix:cycle`.
    pub fn render_lasso(&self, w: &LassoWord) -> String {
        format!("{}:{}", self.render_word(&w.prefix), self.render_word(&w.cycle))
    }

    /// Every word of exactly length `n`, in lexicographic order.
    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..self.len()).map(move |l| {
                        let mut w = w.clone();
                        w.push(l);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// Every nonempty word of length at most `n`, shortest first.
    pub fn words_up_to(&self, n: usize) -> Vec<Word> {
        (1..=n).flat_map(|k| self.words_of_length(k)).collect()
    }
}

/// The ultimately periodic infinite word `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord {
    /// Finite prefix, possibly empty.
    pub prefix: Word,
    /// Repeated nonempty cycle.
    pub cycle: Word,
}

impl LassoWord {
    /// Builds a lasso word; the cycle must be nonempty.
    pub fn new(prefix: Word, cycle: Word) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyCycle);
        }
        Ok(LassoWord { prefix, cycle })
    }

    /// The same infinite word with the shortest cycle and prefix.
    pub fn normalized(&self) -> LassoWord {
        let n = self.cycle.len();
        let period = (1..=n)
            .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| self.cycle[i] == self.cycle[i % p]))
            .unwrap_or(n);
        let mut prefix = self.prefix.clone();
        let mut cycle = self.cycle[..period].to_vec();
        while prefix.last().is_some_and(|l| Some(l) == cycle.last()) {
            prefix.pop();
            cycle.rotate_right(1);
        }
        LassoWord { prefix, cycle }
    }

    /// The letter at position `i` of the infinite word.
    pub fn letter_at(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The first `n` letters of the infinite word.
    pub fn unroll(&self, n: usize) -> Word {
        (0..n).map(|i| self.letter_at(i)).collect()
    }
}

/// A transition `source --letter--> target` with its weight and discount factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    /// Source state.
    pub source: State,
    /// Letter read.
    pub letter: Letter,
    /// Target state.
    pub target: State,
    /// Weight.
    pub weight: Rational,
    /// Discount factor, greater than one.
    pub discount: Rational,
}

/// A finite walk: a start state followed by chained transition indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    /// Start state.
    pub start: State,
    /// Indices into the automaton's transition list.
    pub transitions: Vec<usize>,
}

impl Run {
    /// The word read along the walk.
    pub fn word(&self, a: &Nmda) -> Word {
        self.transitions.iter().map(|&t| a.transition(t).letter).collect()
    }

    /// The final state of the walk.
    pub fn end(&self, a: &Nmda) -> State {
        self.transitions
            .last()
            .map_or(self.start, |&t| a.transition(t).target)
    }
}

/// An automaton described by names, before validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawNmda {
    /// Letter names.
    pub alphabet: Vec<String>,
    /// State names.
    pub states: Vec<String>,
    /// Initial state names.
    pub initial: Vec<String>,
    /// `(source, letter, target, weight, discount)` by name.
    pub transitions: Vec<(String, String, String, Rational, Rational)>,
}

/// A validated nondeterministic discounted-sum automaton with multiple
/// discount factors. It is complete, has a nonempty initial set, and every
/// discount factor exceeds one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nmda {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: Vec<State>,
    transitions: Vec<Transition>,
    out: Vec<Vec<Vec<usize>>>,
}

/// Checks a name-based description and returns a validated automaton, or
/// every violated invariant.
pub fn validate(raw: &RawNmda) -> Result<Nmda> {
    let mut violations = Vec::new();
    let alphabet = match Alphabet::new(raw.alphabet.iter().cloned()) {
        Ok(a) => Some(a),
        Err(Error::Invalid(v)) => {
            violations.extend(v);
            None
        }
        Err(e) => return Err(e),
    };
    let mut state_index = HashMap::new();
    for (i, s) in raw.states.iter().enumerate() {
        if !valid_name(s, false) {
            violations.push(Violation::InvalidName(s.clone()));
        }
        if state_index.insert(s.as_str(), i).is_some() {
            violations.push(Violation::DuplicateState(s.clone()));
        }
    }
    let lookup_state = |name: &str, violations: &mut Vec<Violation>| -> Option<State> {
        let found = state_index.get(name).copied();
        if found.is_none() {
            violations.push(Violation::UnknownState(name.to_string()));
        }
        found
    };
    let mut initial = Vec::new();
    for s in &raw.initial {
        if let Some(q) = lookup_state(s, &mut violations) {
            if !initial.contains(&q) {
                initial.push(q);
            }
        }
    }
    let mut transitions = Vec::new();
    for (src, letter, dst, weight, discount) in &raw.transitions {
        let s = lookup_state(src, &mut violations);
        let d = lookup_state(dst, &mut violations);
        let l = alphabet.as_ref().and_then(|a| {
            let l = a.index_of(letter);
            if l.is_none() {
                violations.push(Violation::UnknownLetter(letter.clone()));
            }
            l
        });
        if let (Some(source), Some(letter), Some(target)) = (s, l, d) {
            transitions.push(Transition {
                source,
                letter,
                target,
                weight: weight.clone(),
                discount: discount.clone(),
            });
        }
    }
    if !violations.is_empty() || alphabet.is_none() {
        let mut extra = structural_violations(
            alphabet.as_ref(),
            &raw.states,
            &initial,
            &transitions,
        );
        violations.append(&mut extra);
        return Err(Error::Invalid(violations));
    }
    Nmda::new(alphabet.unwrap(), raw.states.clone(), initial, transitions)
}

fn structural_violations(
    alphabet: Option<&Alphabet>,
    states: &[String],
    initial: &[State],
    transitions: &[Transition],
) -> Vec<Violation> {
    let mut violations = Vec::new();
    if initial.is_empty() {
        violations.push(Violation::EmptyInitialSet);
    }
    for (i, t) in transitions.iter().enumerate() {
        if t.discount <= Rational::one() {
            violations.push(Violation::DiscountNotGreaterThanOne {
                index: i,
                discount: fmt_rational(&t.discount),
            });
        }
    }
    if let Some(alphabet) = alphabet {
        let mut seen = HashSet::new();
        let mut covered = vec![vec![false; alphabet.len()]; states.len()];
        for t in transitions {
            if t.source >= states.len() || t.target >= states.len() || t.letter >= alphabet.len() {
                continue;
            }
            covered[t.source][t.letter] = true;
            if !seen.insert((t.source, t.letter, t.target)) {
                violations.push(Violation::DuplicateTransition {
                    source: states[t.source].clone(),
                    letter: alphabet.name(t.letter).to_string(),
                    target: states[t.target].clone(),
                });
            }
        }
        for (q, row) in covered.iter().enumerate() {
            for (l, &ok) in row.iter().enumerate() {
                if !ok {
                    violations.push(Violation::IncompleteAutomaton {
                        state: states[q].clone(),
                        letter: alphabet.name(l).to_string(),
                    });
                }
            }
        }
    }
    violations
}

impl Nmda {
    /// Builds and validates an automaton from index-based parts.
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        initial: Vec<State>,
        transitions: Vec<Transition>,
    ) -> Result<Self> {
        let mut violations = Vec::new();
        let mut names = HashSet::new();
        for s in &states {
            if !valid_name(s, false) {
                violations.push(Violation::InvalidName(s.clone()));
            }
            if !names.insert(s.as_str()) {
                violations.push(Violation::DuplicateState(s.clone()));
            }
        }
        for &q in &initial {
            if q >= states.len() {
                violations.push(Violation::UnknownState(format!("#{q}")));
            }
        }
        for t in &transitions {
            if t.source >= states.len() {
                violations.push(Violation::UnknownState(format!("#{}", t.source)));
            }
            if t.target >= states.len() {
                violations.push(Violation::UnknownState(format!("#{}", t.target)));
            }
            if t.letter >= alphabet.len() {
                violations.push(Violation::UnknownLetter(format!("#{}", t.letter)));
            }
        }
        violations.extend(structural_violations(
            Some(&alphabet),
            &states,
            &initial,
            &transitions,
        ));
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        let mut out = vec![vec![Vec::new(); alphabet.len()]; states.len()];
        for (i, t) in transitions.iter().enumerate() {
            out[t.source][t.letter].push(i);
        }
        let mut initial = initial;
        initial.sort_unstable();
        initial.dedup();
        Ok(Nmda {
            alphabet,
            states,
            initial,
            transitions,
            out,
        })
    }

    /// The alphabet.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// State names in canonical order.
    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// Number of states.
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Name of state `q`.
    pub fn state_name(&self, q: State) -> &str {
        &self.states[q]
    }

    /// Index of the state called `name`.
    pub fn state_index(&self, name: &str) -> Option<State> {
        self.states.iter().position(|s| s == name)
    }

    /// Initial states in ascending order.
    pub fn initial(&self) -> &[State] {
        &self.initial
    }

    /// True when `q` is initial.
    pub fn is_initial(&self, q: State) -> bool {
        self.initial.binary_search(&q).is_ok()
    }

    /// All transitions in declaration order.
    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Transition number `i`.
    pub fn transition(&self, i: usize) -> &Transition {
        &self.transitions[i]
    }

    /// Indices of the transitions leaving `q` on `letter`.
    pub fn out(&self, q: State, letter: Letter) -> &[usize] {
        &self.out[q][letter]
    }

    /// Transitions leaving `q` on `letter`.
    pub fn out_transitions(&self, q: State, letter: Letter) -> impl Iterator<Item = &Transition> {
        self.out[q][letter].iter().map(|&i| &self.transitions[i])
    }

    /// Checks that every letter of `word` belongs to the alphabet.
    pub fn check_word(&self, word: &[Letter]) -> Result<()> {
        match word.iter().find(|&&l| l >= self.alphabet.len()) {
            Some(l) => Err(Error::UnknownLetter(format!("#{l}"))),
            None => Ok(()),
        }
    }

    /// True when every discount factor is an integer.
    pub fn is_integral(&self) -> bool {
        self.transitions.iter().all(|t| t.discount.is_integer())
    }

    /// Fails with `NotIntegral` unless every discount factor is an integer.
    pub fn require_integral(&self) -> Result<()> {
        if self.is_integral() {
            Ok(())
        } else {
            Err(Error::NotIntegral)
        }
    }

    /// True when there is one initial state and one transition per state and letter.
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1 && self.out.iter().flatten().all(|ts| ts.len() == 1)
    }

    /// Least common multiple of the weight denominators.
    pub fn weight_denominator(&self) -> BigInt {
        lcm_denominators(self.transitions.iter().map(|t| &t.weight))
    }

    /// Largest difference between two weights; zero when all weights are equal.
    pub fn max_weight_difference(&self) -> Rational {
        let mut weights = self.transitions.iter().map(|t| &t.weight);
        let Some(first) = weights.next() else {
            return Rational::zero();
        };
        let (lo, hi) = weights.fold((first, first), |(lo, hi), w| {
            (if w < lo { w } else { lo }, if w > hi { w } else { hi })
        });
        hi - lo
    }

    /// Largest absolute weight.
    pub fn max_abs_weight(&self) -> Rational {
        self.transitions
            .iter()
            .map(|t| t.weight.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Smallest discount factor.
    pub fn min_discount(&self) -> Rational {
        self.transitions
            .iter()
            .map(|t| t.discount.clone())
            .min()
            .expect("complete automata have transitions")
    }

    /// States reachable from the initial set.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<State> = self.initial.clone();
        for &q in &stack {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            for t in self.out[q].iter().flatten() {
                let p = self.transitions[*t].target;
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// A copy with every weight replaced by `f(weight)`.
    pub fn map_weights(&self, f: impl Fn(&Rational) -> Rational) -> Nmda {
        let mut copy = self.clone();
        for t in &mut copy.transitions {
            t.weight = f(&t.weight);
        }
        copy
    }

    /// The name-based description of this automaton.
    pub fn to_raw(&self) -> RawNmda {
        RawNmda {
            alphabet: self.alphabet.letters().to_vec(),
            states: self.states.clone(),
            initial: self.initial.iter().map(|&q| self.states[q].clone()).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|t| {
                    (
                        self.states[t.source].clone(),
                        self.alphabet.name(t.letter).to_string(),
                        self.states[t.target].clone(),
                        t.weight.clone(),
                        t.discount.clone(),
                    )
                })
                .collect(),
        }
    }
}

/// A deterministic automaton: one initial state and exactly one transition
/// per state and letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dmda(Nmda);

impl Dmda {
    /// Wraps an automaton after checking determinism.
    pub fn new(a: Nmda) -> Result<Self> {
        let mut violations = Vec::new();
        if a.initial.len() != 1 {
            violations.push(Violation::MultipleInitialStates);
        }
        for q in 0..a.num_states() {
            for l in 0..a.alphabet.len() {
                if a.out[q][l].len() > 1 {
                    violations.push(Violation::Nondeterministic {
                        state: a.states[q].clone(),
                        letter: a.alphabet.name(l).to_string(),
                    });
                }
            }
        }
        if violations.is_empty() {
            Ok(Dmda(a))
        } else {
            Err(Error::Invalid(violations))
        }
    }

    /// The single initial state.
    pub fn initial_state(&self) -> State {
        self.0.initial[0]
    }

    /// The unique transition leaving `q` on `letter`.
    pub fn next(&self, q: State, letter: Letter) -> &Transition {
        &self.0.transitions[self.0.out[q][letter][0]]
    }

    /// The state reached after reading `word`.
    pub fn state_after(&self, word: &[Letter]) -> State {
        word.iter()
            .fold(self.initial_state(), |q, &l| self.next(q, l).target)
    }

    /// The underlying automaton.
    pub fn as_nmda(&self) -> &Nmda {
        &self.0
    }

    /// Unwraps into the underlying automaton.
    pub fn into_nmda(self) -> Nmda {
        self.0
    }
}

impl Deref for Dmda {
    type Target = Nmda;

    fn deref(&self) -> &Nmda {
        &self.0
    }
}

/// A transducer described by names, before validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawTransducer {
    /// Letter names.
    pub alphabet: Vec<String>,
    /// State names.
    pub states: Vec<String>,
    /// Initial state name.
    pub initial: String,
    /// `(source, letter, target, output)` by name.
    pub transitions: Vec<(String, String, String, u64)>,
}

/// A Mealy machine emitting an integral discount factor per letter; it
/// represents a choice function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceTransducer {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: State,
    delta: Vec<Vec<(State, u64)>>,
}

impl ChoiceTransducer {
    /// Builds a transducer from a total table `delta[state][letter] = (next, output)`.
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        initial: State,
        delta: Vec<Vec<(State, u64)>>,
    ) -> Result<Self> {
        let mut violations = Vec::new();
        if initial >= states.len() {
            violations.push(Violation::UnknownState(format!("#{initial}")));
        }
        if delta.len() != states.len() {
            violations.push(Violation::InvalidName("transition table size".into()));
        }
        let mut names = HashSet::new();
        for s in &states {
            if !valid_name(s, false) {
                violations.push(Violation::InvalidName(s.clone()));
            }
            if !names.insert(s.as_str()) {
                violations.push(Violation::DuplicateState(s.clone()));
            }
        }
        for (q, row) in delta.iter().enumerate() {
            let name = states.get(q).cloned().unwrap_or_default();
            if row.len() != alphabet.len() {
                violations.push(Violation::MissingTransducerTransition {
                    state: name.clone(),
                    letter: "*".into(),
                });
            }
            for (l, &(next, output)) in row.iter().enumerate() {
                if next >= states.len() {
                    violations.push(Violation::UnknownState(format!("#{next}")));
                }
                if output < 2 {
                    violations.push(Violation::OutputBelowTwo {
                        state: name.clone(),
                        letter: alphabet.letters().get(l).cloned().unwrap_or_default(),
                        output,
                    });
                }
            }
        }
        if violations.is_empty() {
            Ok(ChoiceTransducer {
                alphabet,
                states,
                initial,
                delta,
            })
        } else {
            Err(Error::Invalid(violations))
        }
    }

    /// Validates a name-based description.
    pub fn from_raw(raw: &RawTransducer) -> Result<Self> {
        let alphabet = Alphabet::new(raw.alphabet.iter().cloned())?;
        let mut violations = Vec::new();
        let index = |name: &str, violations: &mut Vec<Violation>| {
            let found = raw.states.iter().position(|s| s == name);
            if found.is_none() {
                violations.push(Violation::UnknownState(name.to_string()));
            }
            found
        };
        let initial = index(&raw.initial, &mut violations);
        let mut table: Vec<Vec<Option<(State, u64)>>> =
            vec![vec![None; alphabet.len()]; raw.states.len()];
        for (src, letter, dst, output) in &raw.transitions {
            let s = index(src, &mut violations);
            let d = index(dst, &mut violations);
            let l = alphabet.index_of(letter);
            if l.is_none() {
                violations.push(Violation::UnknownLetter(letter.clone()));
            }
            if let (Some(s), Some(d), Some(l)) = (s, d, l) {
                if table[s][l].replace((d, *output)).is_some() {
                    violations.push(Violation::Nondeterministic {
                        state: src.clone(),
                        letter: letter.clone(),
                    });
                }
            }
        }
        let mut delta = Vec::new();
        for (q, row) in table.iter().enumerate() {
            let mut full = Vec::new();
            for (l, entry) in row.iter().enumerate() {
                match entry {
                    Some(e) => full.push(*e),
                    None => violations.push(Violation::MissingTransducerTransition {
                        state: raw.states[q].clone(),
                        letter: alphabet.name(l).to_string(),
                    }),
                }
            }
            delta.push(full);
        }
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        ChoiceTransducer::new(alphabet, raw.states.clone(), initial.unwrap(), delta)
    }

    /// The alphabet.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// State names.
    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// Number of states.
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// The initial state.
    pub fn initial(&self) -> State {
        self.initial
    }

    /// `(next state, output)` on reading `letter` in `q`.
    pub fn step(&self, q: State, letter: Letter) -> (State, u64) {
        self.delta[q][letter]
    }

    /// The discount factors chosen along `word`.
    pub fn outputs(&self, word: &[Letter]) -> Vec<u64> {
        let mut q = self.initial;
        word.iter()
            .map(|&l| {
                let (next, out) = self.step(q, l);
                q = next;
                out
            })
            .collect()
    }

    /// Product of the discount factors chosen along `word`.
    pub fn accumulated(&self, word: &[Letter]) -> BigInt {
        self.outputs(word)
            .into_iter()
            .fold(BigInt::one(), |acc, o| acc * BigInt::from(o))
    }

    /// The name-based description of this transducer.
    pub fn to_raw(&self) -> RawTransducer {
        let mut transitions = Vec::new();
        for (q, row) in self.delta.iter().enumerate() {
            for (l, &(next, out)) in row.iter().enumerate() {
                transitions.push((
                    self.states[q].clone(),
                    self.alphabet.name(l).to_string(),
                    self.states[next].clone(),
                    out,
                ));
            }
        }
        RawTransducer {
            alphabet: self.alphabet.letters().to_vec(),
            states: self.states.clone(),
            initial: self.states[self.initial].clone(),
            transitions,
        }
    }
}

/// An NFA described by names, before validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawNfa {
    /// Letter names.
    pub alphabet: Vec<String>,
    /// State names.
    pub states: Vec<String>,
    /// Initial state names.
    pub initial: Vec<String>,
    /// Accepting state names.
    pub accepting: Vec<String>,
    /// `(source, letter, target)` by name.
    pub transitions: Vec<(String, String, String)>,
}

/// A nondeterministic finite automaton over finite words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: Vec<State>,
    accepting: Vec<bool>,
    transitions: Vec<(State, Letter, State)>,
}

impl Nfa {
    /// Builds an NFA from index-based parts.
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        initial: Vec<State>,
        accepting: Vec<State>,
        transitions: Vec<(State, Letter, State)>,
    ) -> Result<Self> {
        let n = states.len();
        let mut violations = Vec::new();
        let mut names = HashSet::new();
        for s in &states {
            if !valid_name(s, false) {
                violations.push(Violation::InvalidName(s.clone()));
            }
            if !names.insert(s.as_str()) {
                violations.push(Violation::DuplicateState(s.clone()));
            }
        }
        for &q in initial.iter().chain(&accepting) {
            if q >= n {
                violations.push(Violation::UnknownState(format!("#{q}")));
            }
        }
        for &(s, l, d) in &transitions {
            if s >= n || d >= n {
                violations.push(Violation::UnknownState(format!("#{}", s.max(d))));
            }
            if l >= alphabet.len() {
                violations.push(Violation::UnknownLetter(format!("#{l}")));
            }
        }
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        let mut acc = vec![false; n];
        for q in accepting {
            acc[q] = true;
        }
        let mut initial = initial;
        initial.sort_unstable();
        initial.dedup();
        let mut transitions = transitions;
        let mut seen = HashSet::new();
        transitions.retain(|t| seen.insert(*t));
        Ok(Nfa {
            alphabet,
            states,
            initial,
            accepting: acc,
            transitions,
        })
    }

    /// Validates a name-based description.
    pub fn from_raw(raw: &RawNfa) -> Result<Self> {
        let alphabet = Alphabet::new(raw.alphabet.iter().cloned())?;
        let mut violations = Vec::new();
        let index = |name: &str, violations: &mut Vec<Violation>| {
            let found = raw.states.iter().position(|s| s == name);
            if found.is_none() {
                violations.push(Violation::UnknownState(name.to_string()));
            }
            found
        };
        let initial: Vec<State> = raw.initial.iter().filter_map(|s| index(s, &mut violations)).collect();
        let accepting: Vec<State> = raw.accepting.iter().filter_map(|s| index(s, &mut violations)).collect();
        let mut transitions = Vec::new();
        for (s, l, d) in &raw.transitions {
            let (s, d) = (index(s, &mut violations), index(d, &mut violations));
            let letter = alphabet.index_of(l);
            if letter.is_none() {
                violations.push(Violation::UnknownLetter(l.clone()));
            }
            if let (Some(s), Some(l), Some(d)) = (s, letter, d) {
                transitions.push((s, l, d));
            }
        }
        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        Nfa::new(alphabet, raw.states.clone(), initial, accepting, transitions)
    }

    /// The alphabet.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// State names.
    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// Number of states.
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Initial states.
    pub fn initial(&self) -> &[State] {
        &self.initial
    }

    /// True when `q` is accepting.
    pub fn is_accepting(&self, q: State) -> bool {
        self.accepting[q]
    }

    /// Transitions `(source, letter, target)`.
    pub fn transitions(&self) -> &[(State, Letter, State)] {
        &self.transitions
    }

    /// Membership of a finite word.
    pub fn accepts(&self, word: &[Letter]) -> bool {
        let mut current = vec![false; self.num_states()];
        for &q in &self.initial {
            current[q] = true;
        }
        for &l in word {
            let mut next = vec![false; self.num_states()];
            for &(s, tl, d) in &self.transitions {
                if tl == l && current[s] {
                    next[d] = true;
                }
            }
            current = next;
        }
        current
            .iter()
            .enumerate()
            .any(|(q, &on)| on && self.accepting[q])
    }

    /// The name-based description of this NFA.
    pub fn to_raw(&self) -> RawNfa {
        RawNfa {
            alphabet: self.alphabet.letters().to_vec(),
            states: self.states.clone(),
            initial: self.initial.iter().map(|&q| self.states[q].clone()).collect(),
            accepting: (0..self.num_states())
                .filter(|&q| self.accepting[q])
                .map(|q| self.states[q].clone())
                .collect(),
            transitions: self
                .transitions
                .iter()
                .map(|&(s, l, d)| {
                    (
                        self.states[s].clone(),
                        self.alphabet.name(l).to_string(),
                        self.states[d].clone(),
                    )
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn raw(transitions: &[(&str, &str, &str, Rational, Rational)]) -> RawNmda {
        RawNmda {
            alphabet: vec!["a".into(), "b".into()],
            states: vec!["p".into(), "q".into()],
            initial: vec!["p".into()],
            transitions: transitions
                .iter()
                .map(|(s, l, d, w, r)| (s.to_string(), l.to_string(), d.to_string(), w.clone(), r.clone()))
                .collect(),
        }
    }

    fn complete() -> Vec<(&'static str, &'static str, &'static str, Rational, Rational)> {
        vec![
            ("p", "a", "q", int(1), int(2)),
            ("p", "b", "p", int(0), int(2)),
            ("q", "a", "q", ratio(1, 2), int(3)),
            ("q", "b", "p", int(-1), int(3)),
        ]
    }

    #[test]
    fn accepts_a_complete_automaton() {
        let a = validate(&raw(&complete())).unwrap();
        assert_eq!(a.transitions().len(), 4);
        assert!(a.is_integral());
        assert!(a.is_deterministic());
        assert_eq!(a.max_weight_difference(), int(2));
        assert_eq!(a.weight_denominator(), BigInt::from(2));
    }

    #[test]
    fn reports_missing_letter_as_incomplete() {
        let mut t = complete();
        t.remove(1);
        let err = validate(&raw(&t)).unwrap_err();
        assert_eq!(
            err,
            Error::Invalid(vec![Violation::IncompleteAutomaton {
                state: "p".into(),
                letter: "b".into()
            }])
        );
    }

    #[test]
    fn reports_discount_one() {
        let mut t = complete();
        t[2].4 = int(1);
        let err = validate(&raw(&t)).unwrap_err();
        assert_eq!(
            err,
            Error::Invalid(vec![Violation::DiscountNotGreaterThanOne {
                index: 2,
                discount: "1".into()
            }])
        );
    }

    #[test]
    fn reports_every_violation_together() {
        let mut r = raw(&complete());
        r.initial.clear();
        r.transitions.push(("p".into(), "c".into(), "z".into(), int(0), int(2)));
        let Error::Invalid(v) = validate(&r).unwrap_err() else {
            panic!("expected invalid");
        };
        assert!(v.contains(&Violation::EmptyInitialSet));
        assert!(v.contains(&Violation::UnknownLetter("c".into())));
        assert!(v.contains(&Violation::UnknownState("z".into())));
    }

    #[test]
    fn non_integral_factor_is_detected() {
        let mut t = complete();
        t[0].4 = ratio(3, 2);
        let a = validate(&raw(&t)).unwrap();
        assert!(!a.is_integral());
        assert_eq!(a.require_integral(), Err(Error::NotIntegral));
    }

    #[test]
    fn word_parsing_rules() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        assert_eq!(ab.parse_word("abba").unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(ab.parse_word("a b").unwrap(), vec![0, 1]);
        assert_eq!(ab.parse_word("").unwrap(), Vec::<Letter>::new());
        assert!(ab.parse_word("abc").is_err());
        let long = Alphabet::new(["inc_x", "halt"]).unwrap();
        assert_eq!(long.parse_word("inc_x,halt").unwrap(), vec![0, 1]);
        assert_eq!(long.parse_word("halt").unwrap(), vec![1]);
        assert_eq!(long.render_word(&[0, 1]), "inc_x,halt");
        let w = ab.parse_lasso("aaa:b").unwrap();
        assert_eq!(w.prefix, vec![0, 0, 0]);
        assert_eq!(w.cycle, vec![1]);
        assert_eq!(ab.render_lasso(&w), "aaa:b");
        assert_eq!(ab.parse_lasso("a:"), Err(Error::EmptyCycle));
        let n = ab.parse_lasso("abab:abab").unwrap().normalized();
        assert_eq!(ab.render_lasso(&n), ":ab");
        let n = ab.parse_lasso("aab:bab").unwrap().normalized();
        assert_eq!(ab.render_lasso(&n), "a:abb");
    }

    #[test]
    fn alphabet_rejects_duplicates_and_empty() {
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["a:b"]).is_err());
    }

    #[test]
    fn transducer_and_nfa_basics() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let t = ChoiceTransducer::new(
            ab.clone(),
            vec!["s0".into(), "s1".into()],
            0,
            vec![vec![(1, 2), (1, 2)], vec![(0, 3), (0, 3)]],
        )
        .unwrap();
        assert_eq!(t.outputs(&[0, 1, 0]), vec![2, 3, 2]);
        assert_eq!(t.accumulated(&[0, 1]), BigInt::from(6));
        assert!(ChoiceTransducer::new(ab.clone(), vec!["s".into()], 0, vec![vec![(0, 1), (0, 2)]]).is_err());
        let n = Nfa::new(ab, vec!["q0".into(), "q1".into()], vec![0], vec![1], vec![(0, 0, 1), (1, 0, 0)]).unwrap();
        assert!(n.accepts(&[0]));
        assert!(!n.accepts(&[0, 0]));
        assert!(!n.accepts(&[1]));
    }
}
