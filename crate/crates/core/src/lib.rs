//! Nondeterministic discounted-sum automata with multiple integral discount
//! factors.
//!
//! The crate covers exact evaluation of finite and ultimately periodic words,
//! tidiness and compliance checks, gap-based determinization, closure
//! operations for automata sharing a choice function, discounted payoff
//! games, and the decision procedures built on them. Every computation uses
//! exact rationals.

pub mod algebra;
pub mod automaton;
pub mod cli;
pub mod decide;
pub mod determinize;
pub mod error;
pub mod eval;
pub mod games;
pub mod gen;
pub mod oracle;
pub mod rational;
pub mod tidy;

pub use automaton::{
    validate, Alphabet, ChoiceTransducer, Dmda, LassoWord, Letter, Nfa, Nmda, RawNfa, RawNmda,
    RawTransducer, Run, State, Transition, Word,
};
pub use error::{Error, Result, Violation};
pub use rational::{Ext, Rational};
