//! Gap-based determinization of tidy integral automata, both on the fly
//! (`det_step`) and materialized (`determinize`), plus the configuration
//! graph explorer shared with the decision procedures.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;

use crate::automaton::{Dmda, Letter, Nmda, Transition, Word};
use crate::error::{Error, Result};
use crate::rational::{Ext, Rational};
use crate::tidy;

/// A determinized state: one gap per source state, in state order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GapConfig(pub Vec<Ext>);

impl GapConfig {
    /// The gaps in state order.
    pub fn gaps(&self) -> &[Ext] {
        &self.0
    }
}

impl fmt::Display for GapConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The source automaton with its truncation bound `2T` and weight denominator `d`.
#[derive(Clone, Debug)]
pub struct DetContext<'a> {
    /// The automaton being determinized.
    pub source: &'a Nmda,
    /// Maximal weight difference.
    pub t: Rational,
    /// Truncation bound `2T`.
    pub two_t: Rational,
    /// Least common denominator of the weights.
    pub d: BigInt,
}

impl<'a> DetContext<'a> {
    /// Checks that `source` is integral and tidy and computes `T` and `d`.
    pub fn new(source: &'a Nmda) -> Result<Self> {
        source.require_integral()?;
        if let Some(w) = tidy::is_tidy(source).witness {
            return Err(Error::NotTidy {
                witness: w.render(source.alphabet()),
            });
        }
        Ok(Self::unchecked(source))
    }

    /// Builds the context without the tidiness and integrality checks.
    pub(crate) fn unchecked(source: &'a Nmda) -> Self {
        let t = source.max_weight_difference();
        DetContext {
            source,
            two_t: &t + &t,
            t,
            d: source.weight_denominator(),
        }
    }

    /// Gap 0 on initial states and `∞` elsewhere.
    pub fn initial_config(&self) -> GapConfig {
        GapConfig(
            (0..self.source.num_states())
                .map(|q| {
                    if self.source.is_initial(q) {
                        Ext::zero()
                    } else {
                        Ext::Infinite
                    }
                })
                .collect(),
        )
    }
}

/// One determinized step: the successor configuration, the transition weight
/// and the transition discount factor.
pub fn det_step(
    ctx: &DetContext<'_>,
    config: &GapConfig,
    letter: Letter,
) -> Result<(GapConfig, Rational, Rational)> {
    let a = ctx.source;
    let mut c: Vec<Ext> = vec![Ext::Infinite; a.num_states()];
    let mut factor: Option<&Rational> = None;
    for (j, g) in config.0.iter().enumerate() {
        let Ext::Finite(g) = g else { continue };
        for t in a.out_transitions(j, letter) {
            factor.get_or_insert(&t.discount);
            let v = Ext::Finite(g + &t.weight);
            if v < c[t.target] {
                c[t.target] = v;
            }
        }
    }
    let factor = factor.ok_or(Error::NoDiscountDefined)?.clone();
    let weight = c
        .iter()
        .filter_map(Ext::finite)
        .min()
        .ok_or(Error::NoDiscountDefined)?
        .clone();
    let gaps = c
        .into_iter()
        .map(|ch| match ch {
            Ext::Finite(v) => {
                let x = &factor * (v - &weight);
                if x > ctx.two_t {
                    Ext::Infinite
                } else {
                    Ext::Finite(x)
                }
            }
            Ext::Infinite => Ext::Infinite,
        })
        .collect();
    Ok((GapConfig(gaps), weight, factor))
}

/// A cooperative cancellation flag shared between a caller and a search.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    /// A fresh, unset token.
    pub fn new() -> Self {
        Self::default()
    }

    /// Requests cancellation.
    pub fn cancel(&self) {
        self.0.store(true, Ordering::SeqCst);
    }

    /// True once cancellation was requested.
    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::SeqCst)
    }
}

/// Limits for exhaustive configuration searches.
#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Maximal number of configurations to intern; unbounded when `None`.
    pub budget: Option<usize>,
    /// Optional cancellation token polled once per configuration.
    pub cancel: Option<CancelToken>,
}

impl SearchOptions {
    /// Options with a configuration budget.
    pub fn with_budget(budget: usize) -> Self {
        SearchOptions {
            budget: Some(budget),
            cancel: None,
        }
    }

    pub(crate) fn check(&self, interned: usize) -> Result<()> {
        if self.cancel.as_ref().is_some_and(CancelToken::is_cancelled) {
            return Err(Error::Cancelled);
        }
        match self.budget {
            Some(b) if interned > b => Err(Error::BudgetExceeded(format!(
                "more than {b} configurations"
            ))),
            _ => Ok(()),
        }
    }
}

/// An edge of the configuration graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigEdge {
    /// Target configuration index.
    pub target: usize,
    /// Transition weight.
    pub weight: Rational,
    /// Transition discount factor.
    pub discount: Rational,
}

/// The reachable configuration graph in breadth-first order.
#[derive(Clone, Debug)]
pub struct ConfigGraph {
    /// Configurations; index 0 is the initial one.
    pub configs: Vec<GapConfig>,
    /// `edges[i][σ]` leaves configuration `i` on letter `σ`.
    pub edges: Vec<Vec<ConfigEdge>>,
    /// BFS parent and letter of every non-initial configuration.
    pub parent: Vec<Option<(usize, Letter)>>,
}

impl ConfigGraph {
    /// Shortest word reaching configuration `i` from the initial one.
    pub fn word_to(&self, mut i: usize) -> Word {
        let mut word = Vec::new();
        while let Some((p, l)) = self.parent[i] {
            word.push(l);
            i = p;
        }
        word.reverse();
        word
    }

    /// Configurations reachable by a nonempty word, with a shortest such word
    /// for each. The initial configuration counts only if it lies on a cycle.
    pub fn nonempty_words(&self) -> Vec<Option<Word>> {
        let n = self.configs.len();
        let mut best: Vec<Option<(usize, Letter)>> = vec![None; n];
        let mut found = vec![false; n];
        let mut queue = VecDeque::new();
        for (l, e) in self.edges[0].iter().enumerate() {
            if !found[e.target] {
                found[e.target] = true;
                best[e.target] = Some((usize::MAX, l));
                queue.push_back(e.target);
            }
        }
        while let Some(i) = queue.pop_front() {
            for (l, e) in self.edges[i].iter().enumerate() {
                if !found[e.target] {
                    found[e.target] = true;
                    best[e.target] = Some((i, l));
                    queue.push_back(e.target);
                }
            }
        }
        (0..n)
            .map(|i| {
                found[i].then(|| {
                    let mut word = Vec::new();
                    let mut at = i;
                    loop {
                        let (p, l) = best[at].expect("found configurations have a parent");
                        word.push(l);
                        if p == usize::MAX {
                            break;
                        }
                        at = p;
                    }
                    word.reverse();
                    word
                })
            })
            .collect()
    }
}

/// Explores every configuration reachable from the initial one, breadth first
/// in letter order.
pub fn explore(ctx: &DetContext<'_>, options: &SearchOptions) -> Result<ConfigGraph> {
    let letters = ctx.source.alphabet().len();
    let mut index: HashMap<GapConfig, usize> = HashMap::new();
    let mut graph = ConfigGraph {
        configs: vec![ctx.initial_config()],
        edges: Vec::new(),
        parent: vec![None],
    };
    index.insert(graph.configs[0].clone(), 0);
    let mut i = 0;
    while i < graph.configs.len() {
        options.check(graph.configs.len())?;
        let mut row = Vec::with_capacity(letters);
        for l in 0..letters {
            let (next, weight, discount) = det_step(ctx, &graph.configs[i], l)?;
            let target = match index.get(&next) {
                Some(&j) => j,
                None => {
                    let j = graph.configs.len();
                    index.insert(next.clone(), j);
                    graph.configs.push(next);
                    graph.parent.push(Some((i, l)));
                    j
                }
            };
            row.push(ConfigEdge {
                target,
                weight,
                discount,
            });
        }
        graph.edges.push(row);
        i += 1;
    }
    options.check(graph.configs.len())?;
    Ok(graph)
}

/// Renders a configuration graph as a deterministic automaton.
pub fn graph_to_dmda(source: &Nmda, graph: &ConfigGraph) -> Result<Dmda> {
    let names: Vec<String> = graph.configs.iter().map(|c| c.to_string()).collect();
    let mut transitions = Vec::new();
    for (i, row) in graph.edges.iter().enumerate() {
        for (l, e) in row.iter().enumerate() {
            transitions.push(Transition {
                source: i,
                letter: l,
                target: e.target,
                weight: e.weight.clone(),
                discount: e.discount.clone(),
            });
        }
    }
    Dmda::new(Nmda::new(
        source.alphabet().clone(),
        names,
        vec![0],
        transitions,
    )?)
}

/// Determinizes a tidy integral automaton; the result agrees with it on
/// every finite and infinite word.
pub fn determinize(a: &Nmda) -> Result<Dmda> {
    determinize_with(a, &SearchOptions::default())
}

/// `determinize` with a configuration budget and cancellation.
pub fn determinize_with(a: &Nmda, options: &SearchOptions) -> Result<Dmda> {
    let ctx = DetContext::new(a)?;
    let graph = explore(&ctx, options)?;
    graph_to_dmda(a, &graph)
}
