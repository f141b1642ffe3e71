//! Error and diagnostic types shared by every module.

use std::fmt;

use thiserror::Error;

/// One violated structural invariant found while validating an automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The alphabet has no letters.
    EmptyAlphabet,
    /// A letter name appears twice.
    DuplicateLetter(String),
    /// A state name appears twice.
    DuplicateState(String),
    /// A name is empty or contains a reserved character.
    InvalidName(String),
    /// No initial state was declared.
    EmptyInitialSet,
    /// A referenced letter is not in the alphabet.
    UnknownLetter(String),
    /// A referenced state was never declared.
    UnknownState(String),
    /// Transition `index` has a discount factor that is not greater than one.
    DiscountNotGreaterThanOne { index: usize, discount: String },
    /// Two transitions share source, letter and target.
    DuplicateTransition { source: String, letter: String, target: String },
    /// The state has no transition on the letter.
    IncompleteAutomaton { state: String, letter: String },
    /// A deterministic automaton declares more than one initial state.
    MultipleInitialStates,
    /// A deterministic automaton has several transitions on the same letter.
    Nondeterministic { state: String, letter: String },
    /// A transducer output is smaller than two.
    OutputBelowTwo { state: String, letter: String, output: u64 },
    /// A transducer lacks a transition on the letter.
    MissingTransducerTransition { state: String, letter: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyAlphabet => write!(f, "alphabet is empty"),
            Violation::DuplicateLetter(l) => write!(f, "duplicate letter `{l}`"),
            Violation::DuplicateState(s) => write!(f, "duplicate state `{s}`"),
            Violation::InvalidName(n) => write!(f, "invalid name `{n}`"),
            Violation::EmptyInitialSet => write!(f, "no initial state"),
            Violation::UnknownLetter(l) => write!(f, "unknown letter `{l}`"),
            Violation::UnknownState(s) => write!(f, "unknown state `{s}`"),
            Violation::DiscountNotGreaterThanOne { index, discount } => {
                write!(f, "transition {index} has discount factor {discount} <= 1")
            }
            Violation::DuplicateTransition { source, letter, target } => {
                write!(f, "duplicate transition {source} -{letter}-> {target}")
            }
            Violation::IncompleteAutomaton { state, letter } => {
                write!(f, "state `{state}` has no transition on `{letter}`")
            }
            Violation::MultipleInitialStates => {
                write!(f, "deterministic automaton has several initial states")
            }
            Violation::Nondeterministic { state, letter } => {
                write!(f, "state `{state}` has several transitions on `{letter}`")
            }
            Violation::OutputBelowTwo { state, letter, output } => {
                write!(f, "transducer output {output} on `{state}`/`{letter}` is below 2")
            }
            Violation::MissingTransducerTransition { state, letter } => {
                write!(f, "transducer state `{state}` has no transition on `{letter}`")
            }
        }
    }
}

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Structural validation failed; every violation is listed.
    #[error("invalid input: {}", join(.0))]
    Invalid(Vec<Violation>),
    /// Two inputs are over different alphabets.
    #[error("alphabet mismatch")]
    AlphabetMismatch,
    /// A word mentions a letter outside the alphabet.
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    /// A walk does not chain or uses a transition that does not exist.
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
    /// A lasso word has an empty cycle.
    #[error("lasso cycle must be nonempty")]
    EmptyCycle,
    /// The automaton is not tidy; the word exhibits two runs ending with different factors.
    #[error("automaton is not tidy (witness `{witness}`)")]
    NotTidy { witness: String },
    /// Some discount factor is not an integer.
    #[error("automaton has a non-integral discount factor")]
    NotIntegral,
    /// A scaling factor is negative.
    #[error("scaling factor must be non-negative")]
    NegativeScalar,
    /// The automata follow different choice functions; the word separates them.
    #[error("incompatible choice functions (witness `{witness}`)")]
    IncompatibleChoiceFunctions { witness: String },
    /// No finite-gap state has a transition on the letter.
    #[error("no discount factor defined for the step")]
    NoDiscountDefined,
    /// An exploration exceeded its configured size limit.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    /// A cooperative cancellation was requested.
    #[error("cancelled")]
    Cancelled,
    /// The relation is not accepted by the operation.
    #[error("relation `{0}` is not supported here")]
    UnsupportedRelation(String),
    /// A linear program has an unbounded objective.
    #[error("linear program is unbounded")]
    LpUnbounded,
    /// A discounted payoff game is malformed.
    #[error("invalid game: {0}")]
    InvalidGame(String),
    /// A counter machine is malformed or misbehaves.
    #[error("invalid counter machine: {0}")]
    InvalidMachine(String),
    /// Text input could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
