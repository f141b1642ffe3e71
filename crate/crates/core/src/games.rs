//! One-player MIN discounted payoff games solved exactly by policy iteration,
//! and an exact two-phase simplex solver for linear programs.

use num_traits::{One, Signed, Zero};

use crate::automaton::{LassoWord, Nmda};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// An edge of a discounted payoff game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpgEdge {
    /// Source vertex.
    pub source: usize,
    /// Target vertex.
    pub target: usize,
    /// Weight.
    pub weight: Rational,
    /// Discount in `(0, 1)`.
    pub discount: Rational,
}

/// A one-player discounted payoff game in which every vertex has an outgoing edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dpg {
    vertices: Vec<String>,
    edges: Vec<DpgEdge>,
    out: Vec<Vec<usize>>,
}

impl Dpg {
    /// Builds a game, checking edge endpoints, discounts and out-degrees.
    pub fn new(vertices: Vec<String>, edges: Vec<DpgEdge>) -> Result<Self> {
        let n = vertices.len();
        let mut out = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.source >= n || e.target >= n {
                return Err(Error::InvalidGame(format!("edge {i} has an unknown endpoint")));
            }
            if !e.discount.is_positive() || e.discount >= Rational::one() {
                return Err(Error::InvalidGame(format!("edge {i} has discount outside (0,1)")));
            }
            out[e.source].push(i);
        }
        if let Some(v) = out.iter().position(Vec::is_empty) {
            return Err(Error::InvalidGame(format!("vertex `{}` has no outgoing edge", vertices[v])));
        }
        Ok(Dpg { vertices, edges, out })
    }

    /// The game of an automaton: one vertex per state and one edge per
    /// transition, with the discount factor inverted. Edge `i` is transition `i`.
    pub fn from_nmda(a: &Nmda) -> Dpg {
        let edges = a
            .transitions()
            .iter()
            .map(|t| DpgEdge {
                source: t.source,
                target: t.target,
                weight: t.weight.clone(),
                discount: t.discount.recip(),
            })
            .collect();
        Dpg::new(a.states().to_vec(), edges).expect("complete automata yield valid games")
    }

    /// Vertex names.
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    /// Number of vertices.
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// All edges.
    pub fn edges(&self) -> &[DpgEdge] {
        &self.edges
    }

    /// Indices of the edges leaving `v`.
    pub fn out(&self, v: usize) -> &[usize] {
        &self.out[v]
    }
}

/// Optimal values and an optimal positional policy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpgSolution {
    /// Minimal play value per vertex.
    pub values: Vec<Rational>,
    /// Chosen edge index per vertex.
    pub policy: Vec<usize>,
}

/// Exact values of the plays induced by a positional policy.
pub fn evaluate_policy(g: &Dpg, policy: &[usize]) -> Vec<Rational> {
    let n = g.num_vertices();
    let mut values: Vec<Option<Rational>> = vec![None; n];
    let mut on_stack = vec![usize::MAX; n];
    for start in 0..n {
        if values[start].is_some() {
            continue;
        }
        let mut path = Vec::new();
        let mut v = start;
        while values[v].is_none() && on_stack[v] == usize::MAX {
            on_stack[v] = path.len();
            path.push(v);
            v = g.edges[policy[v]].target;
        }
        let mut upto = path.len();
        if values[v].is_none() {
            let cycle = &path[on_stack[v]..];
            let mut sum = Rational::zero();
            let mut disc = Rational::one();
            for &u in cycle {
                let e = &g.edges[policy[u]];
                sum += &e.weight * &disc;
                disc *= &e.discount;
            }
            let head = sum / (Rational::one() - disc);
            values[cycle[0]] = Some(head);
            for &u in cycle[1..].iter().rev() {
                let e = &g.edges[policy[u]];
                let next = values[e.target].as_ref().expect("successor evaluated");
                values[u] = Some(&e.weight + &e.discount * next);
            }
            upto = on_stack[v];
        }
        for &u in path[..upto].iter().rev() {
            let e = &g.edges[policy[u]];
            let next = values[e.target].as_ref().expect("successor evaluated");
            values[u] = Some(&e.weight + &e.discount * next);
        }
        for &u in &path {
            on_stack[u] = usize::MAX;
        }
    }
    values.into_iter().map(|v| v.expect("every vertex evaluated")).collect()
}

/// Solves a MIN game by policy iteration.
///
/// The initial policy picks every vertex's lowest-index edge. Each round
/// evaluates the policy exactly and moves every vertex that can strictly
/// improve to its best edge, preferring the lowest index among equals.
pub fn solve_min_dpg(g: &Dpg) -> DpgSolution {
    let mut policy: Vec<usize> = (0..g.num_vertices()).map(|v| g.out[v][0]).collect();
    loop {
        let values = evaluate_policy(g, &policy);
        let mut changed = false;
        for v in 0..g.num_vertices() {
            let mut best: Option<(usize, Rational)> = None;
            for &i in &g.out[v] {
                let e = &g.edges[i];
                let candidate = &e.weight + &e.discount * &values[e.target];
                if candidate < values[v] && best.as_ref().is_none_or(|(_, b)| candidate < *b) {
                    best = Some((i, candidate));
                }
            }
            if let Some((i, _)) = best {
                policy[v] = i;
                changed = true;
            }
        }
        if !changed {
            return DpgSolution { values, policy };
        }
    }
}

/// `s(v) − min_e (w_e + λ_e·s(target))` for every vertex; zero exactly at a solution.
pub fn bellman_residual(g: &Dpg, values: &[Rational]) -> Vec<Rational> {
    (0..g.num_vertices())
        .map(|v| {
            let best = g.out[v]
                .iter()
                .map(|&i| {
                    let e = &g.edges[i];
                    &e.weight + &e.discount * &values[e.target]
                })
                .min()
                .expect("every vertex has an edge");
            &values[v] - best
        })
        .collect()
}

/// The product game of an automaton with the positions of a lasso word.
/// Vertex `q·|positions| + p` is state `q` at position `p`.
pub fn lasso_game(a: &Nmda, w: &LassoWord) -> Result<Dpg> {
    a.check_word(&w.prefix)?;
    a.check_word(&w.cycle)?;
    let len = w.prefix.len() + w.cycle.len();
    let next = |p: usize| if p + 1 < len { p + 1 } else { w.prefix.len() };
    let mut vertices = Vec::with_capacity(a.num_states() * len);
    let mut edges = Vec::new();
    for q in 0..a.num_states() {
        for p in 0..len {
            vertices.push(format!("{}@{p}", a.state_name(q)));
            for t in a.out_transitions(q, w.letter_at(p)) {
                edges.push(DpgEdge {
                    source: q * len + p,
                    target: t.target * len + next(p),
                    weight: t.weight.clone(),
                    discount: t.discount.recip(),
                });
            }
        }
    }
    Dpg::new(vertices, edges)
}

/// Exact value of a lasso word on any automaton, tidy or not, through the
/// product game.
pub fn lasso_value_dpg(a: &Nmda, w: &LassoWord) -> Result<Rational> {
    let g = lasso_game(a, w)?;
    let len = w.prefix.len() + w.cycle.len();
    let solution = solve_min_dpg(&g);
    Ok(a.initial()
        .iter()
        .map(|&q| solution.values[q * len].clone())
        .min()
        .expect("initial set is nonempty"))
}

/// Direction of a linear constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    /// `Σ c·x ≤ b`.
    Le,
    /// `Σ c·x ≥ b`.
    Ge,
    /// `Σ c·x = b`.
    Eq,
}

/// A linear constraint over the program's variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    /// One coefficient per variable.
    pub coeffs: Vec<Rational>,
    /// Direction.
    pub cmp: Cmp,
    /// Right-hand side.
    pub rhs: Rational,
}

/// A linear program `maximize objective·x` subject to the constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    /// Objective coefficients, one per variable.
    pub objective: Vec<Rational>,
    /// Constraints.
    pub constraints: Vec<Constraint>,
    /// Whether each variable is constrained to be non-negative.
    pub nonneg: Vec<bool>,
}

impl LinearProgram {
    /// A program over `n` non-negative variables maximizing their sum.
    pub fn maximize_sum(n: usize) -> Self {
        LinearProgram {
            objective: vec![Rational::one(); n],
            constraints: Vec::new(),
            nonneg: vec![true; n],
        }
    }

    /// Adds `Σ coeffs·x cmp rhs`.
    pub fn constrain(&mut self, coeffs: Vec<Rational>, cmp: Cmp, rhs: Rational) {
        self.constraints.push(Constraint { coeffs, cmp, rhs });
    }
}

/// Result of `lp_maximize`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// An optimal vertex and the objective value.
    Optimal {
        /// Optimal assignment.
        x: Vec<Rational>,
        /// Objective value.
        value: Rational,
    },
    /// No assignment satisfies the constraints.
    Infeasible,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Primal simplex with Bland's rule over the allowed columns. Returns
    /// false when the objective is unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..cost.len()).find(|&j| {
                allowed[j] && !self.basis.contains(&j) && {
                    let z: Rational = self
                        .basis
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| !self.rows[*i][j].is_zero())
                        .map(|(i, &b)| &cost[b] * &self.rows[i][j])
                        .sum();
                    &cost[j] - z > Rational::zero()
                }
            });
            let Some(e) = entering else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][e].is_positive() {
                    let ratio = &self.rhs[i] / &self.rows[i][e];
                    let better = match &leave {
                        None => true,
                        Some((l, best)) => {
                            ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, e);
        }
    }
}

/// Maximizes a linear program exactly with a two-phase simplex using
/// Bland's anti-cycling rule.
pub fn lp_maximize(p: &LinearProgram) -> Result<LpOutcome> {
    let n = p.objective.len();
    let mut columns: Vec<(usize, bool)> = Vec::new();
    for v in 0..n {
        columns.push((v, true));
        if !p.nonneg[v] {
            columns.push((v, false));
        }
    }
    let structural = columns.len();
    let m = p.constraints.len();
    let slack_count = p.constraints.iter().filter(|c| c.cmp != Cmp::Eq).count();
    let total_without_art = structural + slack_count;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = vec![usize::MAX; m];
    let mut slack = structural;
    let mut needs_artificial = Vec::new();
    for (i, c) in p.constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); total_without_art];
        for (j, &(v, positive)) in columns.iter().enumerate() {
            row[j] = if positive { c.coeffs[v].clone() } else { -c.coeffs[v].clone() };
        }
        let mut b = c.rhs.clone();
        let mut slack_col = None;
        match c.cmp {
            Cmp::Le => {
                row[slack] = Rational::one();
                slack_col = Some(slack);
                slack += 1;
            }
            Cmp::Ge => {
                row[slack] = -Rational::one();
                slack_col = Some(slack);
                slack += 1;
            }
            Cmp::Eq => {}
        }
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            b = -b;
        }
        match slack_col {
            Some(s) if row[s].is_one() => basis[i] = s,
            _ => needs_artificial.push(i),
        }
        rows.push(row);
        rhs.push(b);
    }
    let total = total_without_art + needs_artificial.len();
    for row in rows.iter_mut() {
        row.resize(total, Rational::zero());
    }
    for (k, &i) in needs_artificial.iter().enumerate() {
        let col = total_without_art + k;
        rows[i][col] = Rational::one();
        basis[i] = col;
    }
    let mut t = Tableau { rows, rhs, basis };
    let is_artificial = |j: usize| j >= total_without_art;

    if !needs_artificial.is_empty() {
        let cost: Vec<Rational> = (0..total)
            .map(|j| if is_artificial(j) { -Rational::one() } else { Rational::zero() })
            .collect();
        t.optimize(&cost, &vec![true; total]);
        let infeasibility: Rational = t
            .basis
            .iter()
            .zip(&t.rhs)
            .filter(|(&b, _)| is_artificial(b))
            .map(|(_, r)| r.clone())
            .sum();
        if infeasibility.is_positive() {
            return Ok(LpOutcome::Infeasible);
        }
        let mut i = 0;
        while i < t.rows.len() {
            if is_artificial(t.basis[i]) {
                match (0..total_without_art).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }
    let mut cost = vec![Rational::zero(); total];
    for (j, &(v, positive)) in columns.iter().enumerate() {
        cost[j] = if positive { p.objective[v].clone() } else { -p.objective[v].clone() };
    }
    let allowed: Vec<bool> = (0..total).map(|j| !is_artificial(j)).collect();
    if !t.optimize(&cost, &allowed) {
        return Err(Error::LpUnbounded);
    }
    let mut column_value = vec![Rational::zero(); total];
    for (i, &b) in t.basis.iter().enumerate() {
        column_value[b] = t.rhs[i].clone();
    }
    let mut x = vec![Rational::zero(); n];
    for (j, &(v, positive)) in columns.iter().enumerate() {
        if positive {
            x[v] += &column_value[j];
        } else {
            x[v] -= &column_value[j];
        }
    }
    let value = x.iter().zip(&p.objective).map(|(a, b)| a * b).sum();
    Ok(LpOutcome::Optimal { x, value })
}
