//! Embeddings of NFAs into single-factor automata whose values encode
//! membership.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::automaton::{Alphabet, Nfa, Nmda, State};
use crate::error::{Error, Result, Violation};
use crate::gen::Builder;
use crate::rational::{int, ratio, Rational};

/// The hardness gadgets built from an NFA.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    /// Value 0 on accepted words and `1/2^|u|` on rejected ones.
    EqFinite,
    /// [`GadgetKind::EqFinite`] plus an end marker leading to a zero sink.
    EqInfinite,
    /// Value `-1/2^|u|` on accepted words and 0 on rejected ones.
    ExactFinite,
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GadgetKind::EqFinite => "eq-finite",
            GadgetKind::EqInfinite => "eq-infinite",
            GadgetKind::ExactFinite => "exact-finite",
        })
    }
}

impl FromStr for GadgetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "eq-finite" => Ok(GadgetKind::EqFinite),
            "eq-infinite" => Ok(GadgetKind::EqInfinite),
            "exact-finite" => Ok(GadgetKind::ExactFinite),
            other => Err(Error::Parse { line: 0, message: format!("unknown gadget kind `{other}`") }),
        }
    }
}

fn fresh(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// The kind of state an edge touches.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Node {
    Start,
    Accepting,
    Rejecting,
}

/// The NFA completed with a fresh initial state without incoming edges and a
/// rejecting hole, as `(source, letter, target)` edges over the state list
/// `nfa states ++ [start, hole]`.
struct Completed {
    states: Vec<String>,
    start: State,
    edges: BTreeSet<(State, usize, State)>,
}

impl Completed {
    fn new(n: &Nfa) -> Self {
        let mut states = n.states().to_vec();
        let start = states.len();
        states.push(fresh("p0", &states));
        let hole = states.len();
        states.push(fresh("q_hole", &states));
        let mut edges = BTreeSet::new();
        for &(p, l, q) in n.transitions() {
            edges.insert((p, l, q));
            if n.initial().contains(&p) {
                edges.insert((start, l, q));
            }
        }
        for q in 0..states.len() {
            for l in 0..n.alphabet().len() {
                edges.insert((q, l, hole));
            }
        }
        Completed { states, start, edges }
    }

    fn node(&self, n: &Nfa, q: State) -> Node {
        if q == self.start {
            Node::Start
        } else if q < n.num_states() && n.is_accepting(q) {
            Node::Accepting
        } else {
            Node::Rejecting
        }
    }

    fn build(
        &self,
        n: &Nfa,
        alphabet: Alphabet,
        discount: i64,
        weight: impl Fn(Node, bool) -> Rational,
    ) -> Builder {
        let mut b = Builder::new(alphabet);
        for s in &self.states {
            b.state(s);
        }
        b.initial(&self.states[self.start]);
        for &(p, l, q) in &self.edges {
            let w = weight(self.node(n, p), self.node(n, q) == Node::Accepting);
            b.add(&self.states[p], l, &self.states[q], w, int(discount));
        }
        b
    }
}

/// The `λ`-automaton with `n + 2` states whose value on a nonempty word `u`
/// is `-1/λ^|u|` when the NFA accepts `u` and `1/λ^|u|` otherwise.
pub fn nfa_to_nda(n: &Nfa, lambda: u32) -> Result<Nmda> {
    if lambda < 2 {
        return Err(Error::Invalid(vec![Violation::DiscountNotGreaterThanOne {
            index: 0,
            discount: lambda.to_string(),
        }]));
    }
    let l = i64::from(lambda);
    let c = Completed::new(n);
    c.build(n, n.alphabet().clone(), l, |src, to_accepting| match (src, to_accepting) {
        (Node::Start, true) => ratio(-1, l),
        (Node::Start, false) => ratio(1, l),
        (Node::Accepting, true) => ratio(l - 1, l),
        (Node::Accepting, false) => ratio(l + 1, l),
        (Node::Rejecting, true) => ratio(-(l + 1), l),
        (Node::Rejecting, false) => ratio(-(l - 1), l),
    })
    .build()
}

/// The factor-2 hardness gadget of the given kind.
pub fn hardness_gadget(n: &Nfa, kind: GadgetKind) -> Result<Nmda> {
    let c = Completed::new(n);
    match kind {
        GadgetKind::EqFinite => c.build(n, n.alphabet().clone(), 2, eq_weight).build(),
        GadgetKind::ExactFinite => c
            .build(n, n.alphabet().clone(), 2, |src, to_accepting| {
                match (src == Node::Accepting, to_accepting) {
                    (false, true) => ratio(-1, 2),
                    (false, false) => int(0),
                    (true, true) => ratio(1, 2),
                    (true, false) => int(1),
                }
            })
            .build(),
        GadgetKind::EqInfinite => {
            let mut letters = n.alphabet().letters().to_vec();
            let marker = fresh("$", &letters);
            letters.push(marker);
            let alphabet = Alphabet::new(letters)?;
            let marker = alphabet.len() - 1;
            let mut b = c.build(n, alphabet, 2, eq_weight);
            let sink = fresh("q_inf", &c.states);
            for s in &c.states {
                b.add(s, marker, &sink, int(0), int(2));
            }
            for l in 0..b.alphabet().len() {
                b.add(&sink, l, &sink, int(0), int(2));
            }
            b.build()
        }
    }
}

fn eq_weight(src: Node, to_accepting: bool) -> Rational {
    match (src == Node::Rejecting, to_accepting) {
        (false, true) => int(0),
        (false, false) => ratio(1, 2),
        (true, false) => ratio(-1, 2),
        (true, true) => int(-1),
    }
}
