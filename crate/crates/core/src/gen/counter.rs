//! Two-counter machines, their command traces, and the reduction to a pair of
//! integral automata on finite words whose comparison encodes 0-halting.

use std::fmt;

use crate::automaton::{Alphabet, Dmda, Letter, Nmda, Word};
use crate::error::{Error, Result};
use crate::gen::Builder;
use crate::rational::{int, ratio, Rational};

/// One of the two counters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Counter {
    /// The counter `x`.
    X,
    /// The counter `y`.
    Y,
}

impl Counter {
    const ALL: [Counter; 2] = [Counter::X, Counter::Y];

    fn name(self) -> &'static str {
        match self {
            Counter::X => "x",
            Counter::Y => "y",
        }
    }
}

impl fmt::Display for Counter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A command; locations are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    /// Increment the counter and continue at the next location.
    Inc(Counter),
    /// Decrement the counter and continue at the next location.
    Dec(Counter),
    /// Jump to the location.
    Goto(usize),
    /// Jump to the first location if the counter is zero, otherwise to the second.
    Jz(Counter, usize, usize),
    /// Stop.
    Halt,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Inc(c) => write!(f, "inc {c}"),
            Command::Dec(c) => write!(f, "dec {c}"),
            Command::Goto(k) => write!(f, "goto {k}"),
            Command::Jz(c, k, k2) => write!(f, "jz {c} {k} {k2}"),
            Command::Halt => write!(f, "halt"),
        }
    }
}

/// A letter of the command-trace alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceLetter {
    /// An executed increment.
    Inc(Counter),
    /// An executed decrement.
    Dec(Counter),
    /// An unconditional jump to the location.
    Goto(usize),
    /// A conditional jump taken because the counter is zero.
    Zero(Counter, usize),
    /// A conditional jump taken because the counter is positive.
    Positive(Counter, usize),
    /// The halt command.
    Halt,
}

impl TraceLetter {
    /// The letter's name in the trace alphabet.
    pub fn name(&self) -> String {
        match self {
            TraceLetter::Inc(c) => format!("inc_{c}"),
            TraceLetter::Dec(c) => format!("dec_{c}"),
            TraceLetter::Goto(k) => format!("goto_l{k}"),
            TraceLetter::Zero(c, k) => format!("goto_l{k}_{c}=0"),
            TraceLetter::Positive(c, k) => format!("goto_l{k}_{c}>0"),
            TraceLetter::Halt => "halt".to_string(),
        }
    }

    fn incdec(&self) -> Option<(Counter, bool)> {
        match *self {
            TraceLetter::Inc(c) => Some((c, true)),
            TraceLetter::Dec(c) => Some((c, false)),
            _ => None,
        }
    }

    fn is_halt(&self) -> bool {
        *self == TraceLetter::Halt
    }
}

/// A validated two-counter machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterMachine {
    commands: Vec<Command>,
}

fn invalid(message: String) -> Error {
    Error::InvalidMachine(message)
}

impl CounterMachine {
    /// Validates the commands: jump targets lie in range, no increment or
    /// decrement falls off the end, and every `dec c` at location `j` is
    /// guarded by `jz c j-1 j` at location `j-1` with no other jump into `j`.
    pub fn new(commands: Vec<Command>) -> Result<Self> {
        let n = commands.len();
        if n == 0 {
            return Err(invalid("machine has no commands".into()));
        }
        let in_range = |k: usize| (1..=n).contains(&k);
        for (i, cmd) in commands.iter().enumerate() {
            let loc = i + 1;
            match *cmd {
                Command::Goto(k) if !in_range(k) => {
                    return Err(invalid(format!("location {loc} jumps to {k}, outside 1..={n}")));
                }
                Command::Jz(_, k, k2) if !in_range(k) || !in_range(k2) => {
                    return Err(invalid(format!("location {loc} jumps outside 1..={n}")));
                }
                Command::Inc(_) | Command::Dec(_) if loc == n => {
                    return Err(invalid(format!("location {loc} continues past the last command")));
                }
                _ => {}
            }
        }
        for (i, cmd) in commands.iter().enumerate() {
            let Command::Dec(c) = *cmd else { continue };
            let loc = i + 1;
            let guard = Command::Jz(c, loc - 1, loc);
            if loc == 1 || commands[loc - 2] != guard {
                return Err(invalid(format!(
                    "`dec {c}` at location {loc} must follow `jz {c} {} {loc}`",
                    loc.saturating_sub(1)
                )));
            }
            for (j, other) in commands.iter().enumerate() {
                let enters = match *other {
                    Command::Goto(k) => k == loc,
                    Command::Jz(_, k, k2) => (k == loc || k2 == loc) && j + 2 != loc,
                    _ => false,
                };
                if enters {
                    return Err(invalid(format!(
                        "location {} jumps into the guarded `dec {c}` at location {loc}",
                        j + 1
                    )));
                }
            }
        }
        Ok(CounterMachine { commands })
    }

    /// The commands, location 1 first.
    pub fn commands(&self) -> &[Command] {
        &self.commands
    }

    /// The trace letters in alphabet order: the four increments and
    /// decrements, then five jump letters per location, then `halt`.
    pub fn letters(&self) -> Vec<TraceLetter> {
        let mut letters = Vec::with_capacity(5 * self.commands.len() + 5);
        for c in Counter::ALL {
            letters.push(TraceLetter::Inc(c));
            letters.push(TraceLetter::Dec(c));
        }
        for k in 1..=self.commands.len() {
            letters.push(TraceLetter::Goto(k));
            for c in Counter::ALL {
                letters.push(TraceLetter::Zero(c, k));
                letters.push(TraceLetter::Positive(c, k));
            }
        }
        letters.push(TraceLetter::Halt);
        letters
    }

    /// The trace alphabet, with `5n + 5` letters.
    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.letters().iter().map(TraceLetter::name))
            .expect("trace letters are distinct")
    }

    /// The index of a trace letter in [`CounterMachine::alphabet`].
    pub fn letter_index(&self, letter: TraceLetter) -> Letter {
        let n = self.commands.len();
        let counter = |c: Counter| match c {
            Counter::X => 0,
            Counter::Y => 1,
        };
        match letter {
            TraceLetter::Inc(c) => 2 * counter(c),
            TraceLetter::Dec(c) => 2 * counter(c) + 1,
            TraceLetter::Goto(k) => 4 + 5 * (k - 1),
            TraceLetter::Zero(c, k) => 4 + 5 * (k - 1) + 1 + 2 * counter(c),
            TraceLetter::Positive(c, k) => 4 + 5 * (k - 1) + 2 + 2 * counter(c),
            TraceLetter::Halt => 5 * n + 4,
        }
    }

    /// Runs the machine from location 1 with both counters zero for at most
    /// `max_steps` commands.
    pub fn execute(&self, max_steps: usize) -> Execution {
        let (mut x, mut y) = (0u64, 0u64);
        let mut loc = 1;
        let mut trace = Vec::new();
        for _ in 0..max_steps {
            let (letter, next) = match self.commands[loc - 1] {
                Command::Inc(c) => {
                    *if c == Counter::X { &mut x } else { &mut y } += 1;
                    (TraceLetter::Inc(c), loc + 1)
                }
                Command::Dec(c) => {
                    let v = if c == Counter::X { &mut x } else { &mut y };
                    *v = v.saturating_sub(1);
                    (TraceLetter::Dec(c), loc + 1)
                }
                Command::Goto(k) => (TraceLetter::Goto(k), k),
                Command::Jz(c, k, k2) => {
                    let v = if c == Counter::X { x } else { y };
                    if v == 0 {
                        (TraceLetter::Zero(c, k), k)
                    } else {
                        (TraceLetter::Positive(c, k2), k2)
                    }
                }
                Command::Halt => {
                    trace.push(self.letter_index(TraceLetter::Halt));
                    return Execution { trace, halted: true, x, y };
                }
            };
            trace.push(self.letter_index(letter));
            loc = next;
        }
        Execution { trace, halted: false, x, y }
    }
}

/// The outcome of [`CounterMachine::execute`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    /// The command trace, ending with `halt` when the machine halted.
    pub trace: Word,
    /// Whether the machine reached a `halt` command.
    pub halted: bool,
    /// The final value of `x`.
    pub x: u64,
    /// The final value of `y`.
    pub y: u64,
}

impl Execution {
    /// Whether the machine halted with both counters zero.
    pub fn zero_halted(&self) -> bool {
        self.halted && self.x == 0 && self.y == 0
    }
}

fn primal_factor(l: TraceLetter) -> i64 {
    match l {
        TraceLetter::Inc(Counter::X) => 5,
        TraceLetter::Dec(Counter::X) => 4,
        TraceLetter::Inc(Counter::Y) => 7,
        TraceLetter::Dec(Counter::Y) => 6,
        _ => 15,
    }
}

fn dual_factor(l: TraceLetter) -> i64 {
    match l {
        TraceLetter::Inc(Counter::X) => 4,
        TraceLetter::Dec(Counter::X) => 5,
        TraceLetter::Inc(Counter::Y) => 6,
        TraceLetter::Dec(Counter::Y) => 7,
        _ => 15,
    }
}

fn weighted(rho: i64) -> (Rational, Rational) {
    (ratio(rho - 1, rho), int(rho))
}

fn primal(l: TraceLetter) -> (Rational, Rational) {
    weighted(primal_factor(l))
}

fn dual(l: TraceLetter) -> (Rational, Rational) {
    weighted(dual_factor(l))
}

fn sink() -> (Rational, Rational) {
    (int(0), int(2))
}

/// The automata of the reduction: a word whose prefix up to the first `halt`
/// describes the 0-halting run of the machine satisfies `B(w) > A(w)`, and
/// every other word satisfies `B(w) < A(w)`.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// The two-state deterministic automaton.
    pub a: Dmda,
    /// The union of the violation checkers.
    pub b: Nmda,
}

struct Gadgets<'a> {
    builder: Builder,
    letters: &'a [TraceLetter],
}

impl Gadgets<'_> {
    fn add(&mut self, src: &str, l: Letter, dst: &str, (w, d): (Rational, Rational)) {
        self.builder.add(src, l, dst, w, d);
    }

    fn halt_high(&mut self, src: &str, l: Letter) {
        self.add(src, l, "halt", weighted(16));
    }

    /// A single state looping on every non-halt letter with the factor
    /// `factor(letter)`, and moving to `halt` on `halt`.
    fn looping(&mut self, state: &str, factor: impl Fn(TraceLetter) -> i64) {
        self.builder.initial(state);
        for (l, &letter) in self.letters.iter().enumerate() {
            if letter.is_halt() {
                self.halt_high(state, l);
            } else {
                self.add(state, l, state, weighted(factor(letter)));
            }
        }
    }
}

/// Builds the reduction automata for the machine.
pub fn reduce(m: &CounterMachine) -> Reduction {
    let letters = m.letters();
    let alphabet = m.alphabet();

    let mut a = Builder::new(alphabet.clone());
    a.initial("qA");
    for (l, &letter) in letters.iter().enumerate() {
        if letter.is_halt() {
            let (w, d) = weighted(15);
            a.add("qA", l, "qA.h", w, d);
        } else {
            let (w, d) = primal(letter);
            a.add("qA", l, "qA", w, d);
        }
        a.add("qA.h", l, "qA.h", int(0), int(2));
    }
    let a = Dmda::new(a.build().expect("reduction automaton A is valid"))
        .expect("reduction automaton A is deterministic");

    let mut g = Gadgets { builder: Builder::new(alphabet), letters: &letters };
    for l in 0..letters.len() {
        g.add("halt", l, "halt", sink());
        g.add("freeze", l, "freeze", sink());
    }

    g.builder.initial("hc");
    for (l, &letter) in letters.iter().enumerate() {
        if letter.is_halt() {
            g.halt_high("hc", l);
        } else {
            g.add("hc", l, "hc", primal(letter));
            g.add("hc", l, "hc.last", sink());
        }
        g.add("hc.last", l, "freeze", (int(2), int(2)));
    }

    g.looping("nx", |l| match l {
        TraceLetter::Inc(Counter::X) => 10,
        TraceLetter::Dec(Counter::X) => 2,
        other => primal_factor(other),
    });
    g.looping("ny", |l| match l {
        TraceLetter::Inc(Counter::Y) => 14,
        TraceLetter::Dec(Counter::Y) => 3,
        other => primal_factor(other),
    });
    g.looping("pc", dual_factor);

    command_checker(m, &mut g);
    for c in Counter::ALL {
        zero_jump_checker(c, &mut g);
        positive_jump_checker(c, &mut g);
    }

    let b = g.builder.build().expect("reduction automaton B is valid");
    Reduction { a, b }
}

fn local_successor(cmd: Command, loc: usize, letter: TraceLetter) -> Option<usize> {
    match (cmd, letter) {
        (Command::Inc(c), TraceLetter::Inc(d)) | (Command::Dec(c), TraceLetter::Dec(d)) if c == d => {
            Some(loc + 1)
        }
        (Command::Goto(k), TraceLetter::Goto(j)) if k == j => Some(k),
        (Command::Jz(c, k, _), TraceLetter::Zero(d, j)) if c == d && k == j => Some(k),
        (Command::Jz(c, _, k2), TraceLetter::Positive(d, j)) if c == d && k2 == j => Some(k2),
        _ => None,
    }
}

fn command_checker(m: &CounterMachine, g: &mut Gadgets<'_>) {
    let name = |j: usize| format!("cmd.l{j}");
    g.builder.initial(&name(1));
    for (i, &cmd) in m.commands().iter().enumerate() {
        let loc = i + 1;
        for (l, &letter) in g.letters.iter().enumerate() {
            if cmd == Command::Halt && letter.is_halt() {
                g.halt_high(&name(loc), l);
            } else if let Some(next) = local_successor(cmd, loc, letter) {
                g.add(&name(loc), l, &name(next), primal(letter));
            } else {
                g.add(&name(loc), l, "freeze", sink());
            }
        }
    }
}

fn zero_jump_checker(c: Counter, g: &mut Gadgets<'_>) {
    let start = format!("zc.{c}");
    let after = format!("zc.{c}.1");
    g.builder.initial(&start);
    for (l, &letter) in g.letters.iter().enumerate() {
        if letter.is_halt() {
            g.halt_high(&start, l);
            g.halt_high(&after, l);
            continue;
        }
        let own = letter.incdec().is_some_and(|(d, _)| d == c);
        g.add(&start, l, &start, if own { dual(letter) } else { primal(letter) });
        if matches!(letter, TraceLetter::Zero(d, _) if d == c) {
            g.add(&start, l, &after, primal(letter));
        }
        g.add(&after, l, &after, primal(letter));
    }
}

fn positive_jump_checker(c: Counter, g: &mut Gadgets<'_>) {
    let p0 = format!("pj.{c}.0");
    let p1 = format!("pj.{c}.1");
    let p2 = format!("pj.{c}.2");
    g.builder.initial(&p0);
    for (l, &letter) in g.letters.iter().enumerate() {
        if letter.is_halt() {
            g.halt_high(&p0, l);
            g.add(&p1, l, "freeze", (int(1), int(2)));
            g.halt_high(&p2, l);
            continue;
        }
        if letter == TraceLetter::Inc(c) {
            g.add(&p0, l, &p1, dual(letter));
        } else {
            g.add(&p0, l, &p0, primal(letter));
        }
        let positive = matches!(letter, TraceLetter::Positive(d, _) if d == c);
        if positive {
            g.add(&p0, l, "freeze", sink());
            g.add(&p1, l, &p2, primal(letter));
        }
        g.add(&p1, l, &p1, primal(letter));
        let own = letter.incdec().is_some_and(|(d, _)| d == c);
        g.add(&p2, l, &p2, if own { dual(letter) } else { primal(letter) });
    }
}

/// A single-letter edit of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edit {
    /// Remove the letter at the position.
    Delete(usize),
    /// Insert the letter before the position.
    Insert(usize, Letter),
    /// Replace the letter at the position.
    Substitute(usize, Letter),
}

impl Edit {
    /// Applies the edit.
    pub fn apply(&self, word: &[Letter]) -> Word {
        let mut out = word.to_vec();
        match *self {
            Edit::Delete(i) => {
                out.remove(i);
            }
            Edit::Insert(i, l) => out.insert(i, l),
            Edit::Substitute(i, l) => out[i] = l,
        }
        out
    }
}

/// Every single-letter edit of a trace that changes it before its end, over
/// an alphabet of `letters` letters. Inserting a copy of the letter at `i`
/// before it is the same word as inserting it after, so it is skipped.
pub fn single_edits(trace: &[Letter], letters: usize) -> Vec<Edit> {
    let mut edits = Vec::new();
    for (i, &current) in trace.iter().enumerate() {
        edits.push(Edit::Delete(i));
        for l in 0..letters {
            if l != current {
                edits.push(Edit::Insert(i, l));
                edits.push(Edit::Substitute(i, l));
            }
        }
    }
    edits
}
