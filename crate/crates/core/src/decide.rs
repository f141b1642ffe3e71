//! Nonemptiness, containment, equivalence, universality and exact-value
//! problems over finite and infinite words, with witnesses.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::algebra::{check_same_choice, const_automaton, disjoint_union, subtract};
use crate::automaton::{Alphabet, Dmda, LassoWord, Letter, Nmda, State, Transition, Word};
use crate::determinize::{explore, ConfigGraph, DetContext, SearchOptions};
use crate::error::{Error, Result};
use crate::eval::{lasso_value, value_bound, word_value};
use crate::games::{lasso_value_dpg, lp_maximize, solve_min_dpg, Cmp, Dpg, LinearProgram, LpOutcome};
use crate::rational::{int, Ext, Rational};
use crate::tidy::choice_transducer_of;

/// A comparison between a value and a threshold or another value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `<`
    Lt,
    /// `≤`
    Le,
    /// `>`
    Gt,
    /// `≥`
    Ge,
}

impl Relation {
    /// Evaluates `x rel y`.
    pub fn holds(self, x: &Rational, y: &Rational) -> bool {
        match self {
            Relation::Lt => x < y,
            Relation::Le => x <= y,
            Relation::Gt => x > y,
            Relation::Ge => x >= y,
        }
    }

    /// The relation with its strictness swapped and direction flipped, so
    /// that `¬(x rel y)` is `x rel.negated() y`.
    pub fn negated(self) -> Relation {
        match self {
            Relation::Lt => Relation::Ge,
            Relation::Le => Relation::Gt,
            Relation::Gt => Relation::Le,
            Relation::Ge => Relation::Lt,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Lt => "lt",
            Relation::Le => "le",
            Relation::Gt => "gt",
            Relation::Ge => "ge",
        })
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "lt" | "<" => Ok(Relation::Lt),
            "le" | "<=" => Ok(Relation::Le),
            "gt" | ">" => Ok(Relation::Gt),
            "ge" | ">=" => Ok(Relation::Ge),
            _ => Err(format!("unknown relation `{s}`")),
        }
    }
}

/// Whether a problem ranges over nonempty finite words or infinite words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WordMode {
    /// Nonempty finite words.
    Finite,
    /// Infinite words; witnesses are lasso words.
    Infinite,
}

impl fmt::Display for WordMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WordMode::Finite => "finite",
            WordMode::Infinite => "infinite",
        })
    }
}

impl FromStr for WordMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "finite" => Ok(WordMode::Finite),
            "infinite" => Ok(WordMode::Infinite),
            _ => Err(format!("unknown word mode `{s}`")),
        }
    }
}

/// A finite word or a lasso word supporting a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A finite word.
    Finite(Word),
    /// An ultimately periodic infinite word.
    Lasso(LassoWord),
}

impl Witness {
    /// Renders the word; lassos are written `prefix:cycle`.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        match self {
            Witness::Finite(w) => alphabet.render_word(w),
            Witness::Lasso(w) => alphabet.render_lasso(w),
        }
    }
}

/// A boolean answer with an optional witness and the number of explored
/// configurations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    /// The answer.
    pub holds: bool,
    /// A word supporting the answer, when one exists.
    pub witness: Option<Witness>,
    /// Configurations, vertices or search nodes explored.
    pub explored: usize,
}

impl Verdict {
    /// A positive answer without witness.
    pub fn proved() -> Self {
        Verdict { holds: true, witness: None, explored: 0 }
    }

    /// A negative answer without witness.
    pub fn disproved() -> Self {
        Verdict { holds: false, witness: None, explored: 0 }
    }

    /// A positive answer supported by `w`.
    pub fn witnessed(w: Witness) -> Self {
        Verdict { holds: true, witness: Some(w), explored: 0 }
    }

    /// A negative answer refuted by `w`.
    pub fn refuted(w: Witness) -> Self {
        Verdict { holds: false, witness: Some(w), explored: 0 }
    }

    fn explored(mut self, n: usize) -> Self {
        self.explored = n;
        self
    }
}

/// Value of a witness word on `a`; lassos on non-tidy or non-integral
/// automata go through the product game.
pub fn witness_value(a: &Nmda, w: &Witness) -> Result<Rational> {
    match w {
        Witness::Finite(u) => word_value(a, u),
        Witness::Lasso(l) => match lasso_value(a, l) {
            Err(Error::NotTidy { .. } | Error::NotIntegral) => lasso_value_dpg(a, l),
            other => other,
        },
    }
}

fn lasso(prefix: Word, cycle: Word) -> Witness {
    Witness::Lasso(
        LassoWord::new(prefix, cycle)
            .expect("cycles found in graphs are nonempty")
            .normalized(),
    )
}

/// Decides whether some word has value `rel nu`, for `rel` in `{Lt, Le}`.
pub fn nonempty(a: &Nmda, nu: &Rational, rel: Relation, mode: WordMode) -> Result<Verdict> {
    nonempty_with(a, nu, rel, mode, &SearchOptions::default())
}

/// `nonempty` with search limits.
pub fn nonempty_with(
    a: &Nmda,
    nu: &Rational,
    rel: Relation,
    mode: WordMode,
    options: &SearchOptions,
) -> Result<Verdict> {
    if !matches!(rel, Relation::Lt | Relation::Le) {
        return Err(Error::UnsupportedRelation(rel.to_string()));
    }
    match (mode, rel) {
        (WordMode::Infinite, _) => Ok(nonempty_infinite(a, nu, rel)),
        (WordMode::Finite, Relation::Lt) => {
            let primed = finite_to_infinite(a);
            let verdict = nonempty_infinite(&primed, nu, Relation::Lt);
            finite_witness(a, nu, true, verdict.holds, primed.num_states(), options)
        }
        _ => {
            a.require_integral()?;
            let (holds, vars) = nonempty_finite_le_lp(a, nu)?;
            finite_witness(a, nu, false, holds, vars, options)
        }
    }
}

fn nonempty_infinite(a: &Nmda, nu: &Rational, rel: Relation) -> Verdict {
    let g = Dpg::from_nmda(a);
    let solution = solve_min_dpg(&g);
    let start = *a
        .initial()
        .iter()
        .min_by(|&&p, &&q| solution.values[p].cmp(&solution.values[q]))
        .expect("initial set is nonempty");
    if !rel.holds(&solution.values[start], nu) {
        return Verdict::disproved().explored(g.num_vertices());
    }
    let mut position: HashMap<State, usize> = HashMap::new();
    let mut letters = Vec::new();
    let mut v = start;
    while !position.contains_key(&v) {
        position.insert(v, letters.len());
        let t = a.transition(solution.policy[v]);
        letters.push(t.letter);
        v = t.target;
    }
    let cycle = letters.split_off(position[&v]);
    Verdict::witnessed(lasso(letters, cycle)).explored(g.num_vertices())
}

/// An automaton whose infinite-word values realize the infima of the
/// finite-word values of `a`: initial states are duplicated without incoming
/// transitions, and every original state may leave to a zero-weight sink on
/// the first letter.
pub fn finite_to_infinite(a: &Nmda) -> Nmda {
    let n = a.num_states();
    let copies: Vec<State> = a.initial().to_vec();
    let sink = n + copies.len();
    let two = int(2);
    let mut names: Vec<String> = a.states().iter().map(|s| format!("o.{s}")).collect();
    names.extend(copies.iter().map(|&q| format!("i.{}", a.state_name(q))));
    names.push("sink".into());
    let mut transitions: Vec<Transition> = a.transitions().to_vec();
    for (k, &q) in copies.iter().enumerate() {
        for l in 0..a.alphabet().len() {
            for t in a.out_transitions(q, l) {
                transitions.push(Transition { source: n + k, ..t.clone() });
            }
        }
    }
    for q in 0..n {
        transitions.push(Transition {
            source: q,
            letter: 0,
            target: sink,
            weight: Rational::zero(),
            discount: two.clone(),
        });
    }
    for l in 0..a.alphabet().len() {
        transitions.push(Transition {
            source: sink,
            letter: l,
            target: sink,
            weight: Rational::zero(),
            discount: two.clone(),
        });
    }
    let initial = (n..n + copies.len()).collect();
    Nmda::new(a.alphabet().clone(), names, initial, transitions)
        .expect("the sink extension is complete")
}

/// Decides finite-word nonemptiness with `≤` by the linear program over the
/// normalized differences of the states with an incoming transition.
fn nonempty_finite_le_lp(a: &Nmda, nu: &Rational) -> Result<(bool, usize)> {
    let reachable = a.reachable();
    let mut var: Vec<Option<usize>> = vec![None; a.num_states()];
    let mut count = 0;
    for t in a.transitions() {
        if reachable[t.source] && var[t.target].is_none() {
            var[t.target] = Some(count);
            count += 1;
        }
    }
    let mut lp = LinearProgram::maximize_sum(count);
    for t in a.transitions().iter().filter(|t| reachable[t.source]) {
        let j = var[t.target].expect("targets of reachable transitions are variables");
        if a.is_initial(t.source) {
            let mut coeffs = vec![Rational::zero(); count];
            coeffs[j] = int(1);
            lp.constrain(coeffs, Cmp::Le, &t.discount * (&t.weight - nu));
        }
        if let Some(i) = var[t.source] {
            let mut coeffs = vec![Rational::zero(); count];
            coeffs[j] += int(1);
            coeffs[i] -= &t.discount;
            lp.constrain(coeffs, Cmp::Le, &t.discount * &t.weight);
        }
    }
    let holds = match lp_maximize(&lp)? {
        LpOutcome::Infeasible => true,
        LpOutcome::Optimal { x, .. } => x.iter().any(Zero::is_zero),
    };
    Ok((holds, count))
}

const DEFAULT_WITNESS_NODES: usize = 1_000_000;

/// Shortest nonempty word with `a(u) < nu` (strict) or `a(u) ≤ nu`, searching
/// breadth first over states paired with normalized differences
/// `ρ(u)·(value − nu)`. Differences above the value bound can never return
/// below zero and are pruned. Returns `None` when the node limit is reached
/// first.
pub fn shortest_finite_witness(
    a: &Nmda,
    nu: &Rational,
    strict: bool,
    options: &SearchOptions,
) -> Result<Option<Word>> {
    type Key = (State, Rational);
    let bound = value_bound(a);
    let hit = |d: &Rational| if strict { d.is_negative() } else { !d.is_positive() };
    let limit = options.budget.unwrap_or(DEFAULT_WITNESS_NODES);
    let mut parent: HashMap<Key, (Option<Key>, Letter)> = HashMap::new();
    let mut queue: VecDeque<Option<Key>> = VecDeque::from([None]);
    while let Some(from) = queue.pop_front() {
        options.check(0)?;
        if parent.len() > limit {
            return Ok(None);
        }
        let steps: Vec<(&Transition, Rational)> = match &from {
            None => a
                .initial()
                .iter()
                .flat_map(|&q| (0..a.alphabet().len()).flat_map(move |l| a.out_transitions(q, l)))
                .map(|t| (t, &t.discount * (&t.weight - nu)))
                .collect(),
            Some((q, d)) => (0..a.alphabet().len())
                .flat_map(|l| a.out_transitions(*q, l))
                .map(|t| (t, &t.discount * (d + &t.weight)))
                .collect(),
        };
        for (t, d) in steps {
            if hit(&d) {
                let mut word = vec![t.letter];
                let mut at = from.clone();
                while let Some(key) = at {
                    let (prev, l) = parent[&key].clone();
                    word.push(l);
                    at = prev;
                }
                word.reverse();
                return Ok(Some(word));
            }
            let key = (t.target, d);
            if key.1 <= bound && !parent.contains_key(&key) {
                parent.insert(key.clone(), (from.clone(), t.letter));
                queue.push_back(Some(key));
            }
        }
    }
    Ok(None)
}

fn finite_witness(
    a: &Nmda,
    nu: &Rational,
    strict: bool,
    holds: bool,
    explored: usize,
    options: &SearchOptions,
) -> Result<Verdict> {
    if !holds {
        return Ok(Verdict::disproved().explored(explored));
    }
    let verdict = match shortest_finite_witness(a, nu, strict, options)? {
        Some(w) => Verdict::witnessed(Witness::Finite(w)),
        None => Verdict::proved(),
    };
    Ok(verdict.explored(explored))
}

/// Strongly connected components of the configuration graph; returns for
/// each configuration whether it lies on a cycle.
fn on_cycle(graph: &ConfigGraph) -> Vec<bool> {
    let n = graph.configs.len();
    let succ = |v: usize| graph.edges[v].iter().map(|e| e.target);
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if visited[s] {
            continue;
        }
        visited[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some((v, k)) = stack.last_mut() {
            let v = *v;
            if let Some(w) = succ(v).nth(*k) {
                *k += 1;
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    let mut reverse = vec![Vec::new(); n];
    for v in 0..n {
        for w in succ(v) {
            reverse[w].push(v);
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        let c = sizes.len();
        comp[s] = c;
        let mut size = 0;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in &reverse[v] {
                if comp[w] == usize::MAX {
                    comp[w] = c;
                    stack.push(w);
                }
            }
        }
        sizes.push(size);
    }
    (0..n)
        .map(|v| sizes[comp[v]] > 1 || succ(v).any(|w| w == v))
        .collect()
}

/// Shortest nonempty word leading from configuration `i` back to itself.
fn shortest_cycle(graph: &ConfigGraph, i: usize) -> Word {
    let mut parent: HashMap<usize, (usize, Letter)> = HashMap::new();
    let mut queue = VecDeque::from([i]);
    while let Some(v) = queue.pop_front() {
        for (l, e) in graph.edges[v].iter().enumerate() {
            if e.target == i {
                let mut word = vec![l];
                let mut at = v;
                while at != i {
                    let (p, pl) = parent[&at];
                    word.push(pl);
                    at = p;
                }
                word.reverse();
                return word;
            }
            if e.target != i && !parent.contains_key(&e.target) {
                parent.insert(e.target, (v, l));
                queue.push_back(e.target);
            }
        }
    }
    unreachable!("configuration lies on a cycle")
}

/// First configuration, by shortest nonempty access word, satisfying `pred`.
fn finite_search(graph: &ConfigGraph, pred: impl Fn(&[Ext]) -> bool) -> Option<Word> {
    graph
        .nonempty_words()
        .into_iter()
        .enumerate()
        .filter_map(|(i, w)| w.filter(|_| pred(graph.configs[i].gaps())))
        .min_by_key(Vec::len)
}

/// First configuration on a cycle, by shortest access word, satisfying
/// `pred`; returns the lasso through it.
fn cyclic_search(graph: &ConfigGraph, pred: impl Fn(&[Ext]) -> bool) -> Option<Witness> {
    let cyclic = on_cycle(graph);
    (0..graph.configs.len())
        .filter(|&i| cyclic[i] && pred(graph.configs[i].gaps()))
        .min_by_key(|&i| (graph.word_to(i).len(), i))
        .map(|i| lasso(graph.word_to(i), shortest_cycle(graph, i)))
}

/// Decides `∀w: a(w) rel b(w)` for `rel` in `{Gt, Ge}` and automata sharing a
/// choice function.
pub fn contain(a: &Nmda, b: &Nmda, rel: Relation, mode: WordMode) -> Result<Verdict> {
    contain_with(a, b, rel, mode, &SearchOptions::default())
}

/// `contain` with search limits.
pub fn contain_with(
    a: &Nmda,
    b: &Nmda,
    rel: Relation,
    mode: WordMode,
    options: &SearchOptions,
) -> Result<Verdict> {
    if !matches!(rel, Relation::Gt | Relation::Ge) {
        return Err(Error::UnsupportedRelation(rel.to_string()));
    }
    check_same_choice(a, b)?;
    a.require_integral()?;
    b.require_integral()?;
    let union = disjoint_union(a, b)?;
    let ctx = DetContext::unchecked(&union);
    let graph = explore(&ctx, options)?;
    let na = a.num_states();
    let a_zero = |g: &[Ext]| g[..na].iter().any(Ext::is_zero);
    let witness = match (mode, rel) {
        (WordMode::Finite, Relation::Gt) => finite_search(&graph, a_zero).map(Witness::Finite),
        (WordMode::Finite, _) => {
            finite_search(&graph, |g| a_zero(g) && g[na..].iter().all(|x| !x.is_zero()))
                .map(Witness::Finite)
        }
        (WordMode::Infinite, Relation::Ge) => (0..graph.configs.len())
            .filter(|&i| {
                let g = graph.configs[i].gaps();
                a_zero(g) && g[na..].iter().all(Ext::is_infinite)
            })
            .min_by_key(|&i| (graph.word_to(i).len(), i))
            .map(|i| lasso(graph.word_to(i), vec![0])),
        (WordMode::Infinite, _) => {
            cyclic_search(&graph, |g| g[..na].iter().any(|x| !x.is_infinite()))
        }
    };
    let verdict = match witness {
        Some(w) => Verdict::refuted(w),
        None => Verdict::proved(),
    };
    Ok(verdict.explored(graph.configs.len()))
}

/// Decides `∀w: a(w) = b(w)` by two non-strict containments.
pub fn equivalent(a: &Nmda, b: &Nmda, mode: WordMode) -> Result<Verdict> {
    equivalent_with(a, b, mode, &SearchOptions::default())
}

/// `equivalent` with search limits.
pub fn equivalent_with(
    a: &Nmda,
    b: &Nmda,
    mode: WordMode,
    options: &SearchOptions,
) -> Result<Verdict> {
    let first = contain_with(a, b, Relation::Ge, mode, options)?;
    if !first.holds {
        return Ok(first);
    }
    let second = contain_with(b, a, Relation::Ge, mode, options)?;
    let explored = first.explored + second.explored;
    Ok(second.explored(explored))
}

/// Decides `∀w: a(w) rel nu` for `rel` in `{Lt, Le}`.
pub fn universal(a: &Nmda, nu: &Rational, rel: Relation, mode: WordMode) -> Result<Verdict> {
    universal_with(a, nu, rel, mode, &SearchOptions::default())
}

/// `universal` with search limits.
pub fn universal_with(
    a: &Nmda,
    nu: &Rational,
    rel: Relation,
    mode: WordMode,
    options: &SearchOptions,
) -> Result<Verdict> {
    let flipped = match rel {
        Relation::Lt => Relation::Gt,
        Relation::Le => Relation::Ge,
        other => return Err(Error::UnsupportedRelation(other.to_string())),
    };
    let theta = choice_transducer_of(a)?;
    let c = const_automaton(&theta, nu);
    contain_with(&c, a, flipped, mode, options)
}

/// Decides `∃w: a(w) = nu`.
pub fn exact_value(a: &Nmda, nu: &Rational, mode: WordMode) -> Result<Verdict> {
    exact_value_with(a, nu, mode, &SearchOptions::default())
}

/// `exact_value` with search limits.
pub fn exact_value_with(
    a: &Nmda,
    nu: &Rational,
    mode: WordMode,
    options: &SearchOptions,
) -> Result<Verdict> {
    let theta = choice_transducer_of(a)?;
    let c = const_automaton(&theta, nu);
    let union = disjoint_union(a, &c)?;
    let ctx = DetContext::unchecked(&union);
    let graph = explore(&ctx, options)?;
    let na = a.num_states();
    let witness = match mode {
        WordMode::Finite => finite_search(&graph, |g| {
            g[..na].iter().any(Ext::is_zero) && g[na..].iter().any(Ext::is_zero)
        })
        .map(Witness::Finite),
        WordMode::Infinite => cyclic_search(&graph, |g| {
            g[..na].iter().any(|x| !x.is_infinite()) && g[na..].iter().any(|x| !x.is_infinite())
        }),
    };
    let verdict = match witness {
        Some(w) => Verdict::witnessed(w),
        None => Verdict::disproved(),
    };
    Ok(verdict.explored(graph.configs.len()))
}

/// Containment between deterministic automata through their difference and
/// nonemptiness with swapped strictness.
pub fn dmda_contain(a: &Dmda, b: &Dmda, rel: Relation, mode: WordMode) -> Result<Verdict> {
    let strictness = match rel {
        Relation::Gt => Relation::Le,
        Relation::Ge => Relation::Lt,
        other => return Err(Error::UnsupportedRelation(other.to_string())),
    };
    check_same_choice(a, b)?;
    let difference = subtract(a, b)?;
    let v = nonempty(&difference, &Rational::zero(), strictness, mode)?;
    Ok(Verdict {
        holds: !v.holds,
        witness: v.witness,
        explored: v.explored,
    })
}
