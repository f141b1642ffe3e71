//! The line-oriented text format for automata, transducers, NFAs and counter
//! machines.
//!
//! ```text
//! NMDA
//! # comments start with '#'
//! alphabet: a b
//! states: q0 q1
//! initial: q0
//! t: q0 a q1 1/2 2
//! ```

use crate::automaton::{
    validate, ChoiceTransducer, Dmda, Nfa, Nmda, RawNfa, RawNmda, RawTransducer,
};
use crate::error::{Error, Result};
use crate::gen::counter::{Command, Counter, CounterMachine};
use crate::rational::{fmt_rational, parse_rational};

/// Any document the format can hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    /// A nondeterministic automaton.
    Nmda(Nmda),
    /// A deterministic automaton.
    Dmda(Dmda),
    /// A choice transducer.
    Transducer(ChoiceTransducer),
    /// A finite automaton.
    Nfa(Nfa),
    /// A two-counter machine.
    Machine(CounterMachine),
}

impl Document {
    /// The document's kind keyword.
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Nmda(_) => "NMDA",
            Document::Dmda(_) => "DMDA",
            Document::Transducer(_) => "TRANSDUCER",
            Document::Nfa(_) => "NFA",
            Document::Machine(_) => "CM",
        }
    }

    /// The automaton, for NMDA and DMDA documents.
    pub fn as_nmda(&self) -> Option<&Nmda> {
        match self {
            Document::Nmda(a) => Some(a),
            Document::Dmda(d) => Some(d.as_nmda()),
            _ => None,
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

struct Lines<'a> {
    kind: (usize, &'a str),
    body: Vec<(usize, &'a str)>,
}

fn split_lines(text: &str) -> Result<Lines<'_>> {
    let mut lines = text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    });
    let kind = lines.next().ok_or_else(|| parse_err(1, "empty document"))?;
    Ok(Lines { kind, body: lines.collect() })
}

fn names(rest: &str) -> Vec<String> {
    rest.split_whitespace().map(str::to_string).collect()
}

fn rational(line: usize, text: &str) -> Result<crate::Rational> {
    parse_rational(text).ok_or_else(|| parse_err(line, format!("`{text}` is not a rational")))
}

/// Parses any document.
pub fn parse_document(text: &str) -> Result<Document> {
    let lines = split_lines(text)?;
    let (line, kind) = lines.kind;
    match kind {
        "NMDA" => Ok(Document::Nmda(automaton(&lines)?)),
        "DMDA" => Ok(Document::Dmda(Dmda::new(automaton(&lines)?)?)),
        "TRANSDUCER" => Ok(Document::Transducer(transducer(&lines)?)),
        "NFA" => Ok(Document::Nfa(nfa(&lines)?)),
        "CM" => Ok(Document::Machine(machine(&lines)?)),
        other => Err(parse_err(line, format!("unknown document kind `{other}`"))),
    }
}

/// Parses an NMDA or DMDA document as an automaton.
pub fn parse_nmda(text: &str) -> Result<Nmda> {
    match parse_document(text)? {
        Document::Nmda(a) => Ok(a),
        Document::Dmda(d) => Ok(d.into_nmda()),
        other => Err(parse_err(1, format!("expected NMDA or DMDA, found {}", other.kind()))),
    }
}

/// Parses a TRANSDUCER document.
pub fn parse_transducer(text: &str) -> Result<ChoiceTransducer> {
    match parse_document(text)? {
        Document::Transducer(t) => Ok(t),
        other => Err(parse_err(1, format!("expected TRANSDUCER, found {}", other.kind()))),
    }
}

/// Parses an NFA document.
pub fn parse_nfa(text: &str) -> Result<Nfa> {
    match parse_document(text)? {
        Document::Nfa(n) => Ok(n),
        other => Err(parse_err(1, format!("expected NFA, found {}", other.kind()))),
    }
}

/// Parses a CM document.
pub fn parse_machine(text: &str) -> Result<CounterMachine> {
    match parse_document(text)? {
        Document::Machine(m) => Ok(m),
        other => Err(parse_err(1, format!("expected CM, found {}", other.kind()))),
    }
}

#[derive(Default)]
struct Header {
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: Vec<String>,
    accepting: Vec<String>,
    transitions: Vec<(usize, Vec<String>)>,
}

fn header(lines: &Lines<'_>, allow_accepting: bool) -> Result<Header> {
    let mut h = Header::default();
    for &(line, text) in &lines.body {
        let (key, rest) = text
            .split_once(':')
            .ok_or_else(|| parse_err(line, format!("expected `key: value`, found `{text}`")))?;
        match key.trim() {
            "alphabet" => h.alphabet.extend(names(rest)),
            "states" => h.states.extend(names(rest)),
            "initial" => h.initial.extend(names(rest)),
            "accepting" if allow_accepting => h.accepting.extend(names(rest)),
            "t" => h.transitions.push((line, names(rest))),
            other => return Err(parse_err(line, format!("unknown key `{other}`"))),
        }
    }
    Ok(h)
}

fn automaton(lines: &Lines<'_>) -> Result<Nmda> {
    let h = header(lines, false)?;
    let mut raw = RawNmda {
        alphabet: h.alphabet,
        states: h.states,
        initial: h.initial,
        transitions: Vec::new(),
    };
    for (line, fields) in h.transitions {
        let [src, letter, dst, weight, discount] = fields.as_slice() else {
            return Err(parse_err(line, "transition needs `src letter dst weight discount`"));
        };
        raw.transitions.push((
            src.clone(),
            letter.clone(),
            dst.clone(),
            rational(line, weight)?,
            rational(line, discount)?,
        ));
    }
    validate(&raw)
}

fn transducer(lines: &Lines<'_>) -> Result<ChoiceTransducer> {
    let h = header(lines, false)?;
    let [initial] = h.initial.as_slice() else {
        return Err(parse_err(lines.kind.0, "a transducer has exactly one initial state"));
    };
    let mut raw = RawTransducer {
        alphabet: h.alphabet,
        states: h.states,
        initial: initial.clone(),
        transitions: Vec::new(),
    };
    for (line, fields) in h.transitions {
        let [src, letter, dst, output] = fields.as_slice() else {
            return Err(parse_err(line, "transition needs `src letter dst output`"));
        };
        let output = output
            .parse::<u64>()
            .map_err(|_| parse_err(line, format!("`{output}` is not a positive integer")))?;
        raw.transitions.push((src.clone(), letter.clone(), dst.clone(), output));
    }
    ChoiceTransducer::from_raw(&raw)
}

fn nfa(lines: &Lines<'_>) -> Result<Nfa> {
    let h = header(lines, true)?;
    let mut raw = RawNfa {
        alphabet: h.alphabet,
        states: h.states,
        initial: h.initial,
        accepting: h.accepting,
        transitions: Vec::new(),
    };
    for (line, fields) in h.transitions {
        let [src, letter, dst] = fields.as_slice() else {
            return Err(parse_err(line, "transition needs `src letter dst`"));
        };
        raw.transitions.push((src.clone(), letter.clone(), dst.clone()));
    }
    Nfa::from_raw(&raw)
}

fn counter(line: usize, text: &str) -> Result<Counter> {
    match text {
        "x" => Ok(Counter::X),
        "y" => Ok(Counter::Y),
        other => Err(parse_err(line, format!("unknown counter `{other}`"))),
    }
}

fn location(line: usize, text: &str) -> Result<usize> {
    text.parse()
        .map_err(|_| parse_err(line, format!("`{text}` is not a location")))
}

fn machine(lines: &Lines<'_>) -> Result<CounterMachine> {
    let mut commands = Vec::new();
    for &(line, text) in &lines.body {
        let (index, rest) = text
            .split_once(':')
            .ok_or_else(|| parse_err(line, "expected `<index>: <command>`"))?;
        let index = location(line, index.trim())?;
        if index != commands.len() + 1 {
            return Err(parse_err(line, format!("expected location {}", commands.len() + 1)));
        }
        let fields: Vec<&str> = rest.split_whitespace().collect();
        let command = match fields.as_slice() {
            ["inc", c] => Command::Inc(counter(line, c)?),
            ["dec", c] => Command::Dec(counter(line, c)?),
            ["goto", k] => Command::Goto(location(line, k)?),
            ["jz", c, k, k2] => Command::Jz(counter(line, c)?, location(line, k)?, location(line, k2)?),
            ["halt"] => Command::Halt,
            _ => return Err(parse_err(line, format!("unknown command `{}`", rest.trim()))),
        };
        commands.push(command);
    }
    CounterMachine::new(commands)
}

/// Renders an automaton; `parse_nmda` reads it back identically.
pub fn write_nmda(a: &Nmda, kind: &str) -> String {
    let mut out = format!("{kind}\n");
    out.push_str(&format!("alphabet: {}\n", a.alphabet().letters().join(" ")));
    out.push_str(&format!("states: {}\n", a.states().join(" ")));
    let initial: Vec<&str> = a.initial().iter().map(|&q| a.state_name(q)).collect();
    out.push_str(&format!("initial: {}\n", initial.join(" ")));
    for t in a.transitions() {
        out.push_str(&format!(
            "t: {} {} {} {} {}\n",
            a.state_name(t.source),
            a.alphabet().name(t.letter),
            a.state_name(t.target),
            fmt_rational(&t.weight),
            fmt_rational(&t.discount)
        ));
    }
    out
}

/// Renders a transducer.
pub fn write_transducer(t: &ChoiceTransducer) -> String {
    let raw = t.to_raw();
    let mut out = String::from("TRANSDUCER\n");
    out.push_str(&format!("alphabet: {}\n", raw.alphabet.join(" ")));
    out.push_str(&format!("states: {}\n", raw.states.join(" ")));
    out.push_str(&format!("initial: {}\n", raw.initial));
    for (s, l, d, o) in raw.transitions {
        out.push_str(&format!("t: {s} {l} {d} {o}\n"));
    }
    out
}

/// Renders an NFA.
pub fn write_nfa(n: &Nfa) -> String {
    let raw = n.to_raw();
    let mut out = String::from("NFA\n");
    out.push_str(&format!("alphabet: {}\n", raw.alphabet.join(" ")));
    out.push_str(&format!("states: {}\n", raw.states.join(" ")));
    out.push_str(&format!("initial: {}\n", raw.initial.join(" ")));
    out.push_str(&format!("accepting: {}\n", raw.accepting.join(" ")));
    for (s, l, d) in raw.transitions {
        out.push_str(&format!("t: {s} {l} {d}\n"));
    }
    out
}

/// Renders a counter machine.
pub fn write_machine(m: &CounterMachine) -> String {
    let mut out = String::from("CM\n");
    for (i, c) in m.commands().iter().enumerate() {
        out.push_str(&format!("{}: {c}\n", i + 1));
    }
    out
}

/// Renders any document.
pub fn write_document(d: &Document) -> String {
    match d {
        Document::Nmda(a) => write_nmda(a, "NMDA"),
        Document::Dmda(a) => write_nmda(a, "DMDA"),
        Document::Transducer(t) => write_transducer(t),
        Document::Nfa(n) => write_nfa(n),
        Document::Machine(m) => write_machine(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "NMDA\n# tiny\nalphabet: a b\nstates: p q\ninitial: p\n\
        t: p a q 1/2 2\nt: p b p 0 2\nt: q a q -1 3\nt: q b p 3 3 # trailing\n";

    #[test]
    fn parses_and_round_trips() {
        let a = parse_nmda(SMALL).unwrap();
        assert_eq!(a.transitions().len(), 4);
        let text = write_nmda(&a, "NMDA");
        assert_eq!(parse_nmda(&text).unwrap(), a);
        let d = parse_document(&text.replacen("NMDA", "DMDA", 1)).unwrap();
        assert!(matches!(d, Document::Dmda(_)));
    }

    #[test]
    fn reports_line_numbers() {
        let bad = SMALL.replace("t: q a q -1 3", "t: q a q -1/0 3");
        assert!(matches!(parse_nmda(&bad), Err(Error::Parse { line: 8, .. })));
        assert!(matches!(parse_nmda("WHAT\n"), Err(Error::Parse { line: 1, .. })));
        let missing = SMALL.replace("t: q b p 3 3 # trailing\n", "");
        assert!(matches!(parse_nmda(&missing), Err(Error::Invalid(_))));
    }

    #[test]
    fn machines_round_trip() {
        let text = "CM\n1: inc x\n2: jz x 2 3\n3: dec x\n4: halt\n";
        let m = parse_machine(text).unwrap();
        assert_eq!(write_machine(&m), text);
    }
}
