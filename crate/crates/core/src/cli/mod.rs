//! The command-line front end. Every invocation prints one JSON document to
//! standard output and diagnostics to standard error.
//!
//! Exit codes: 0 when a result was computed, 2 for unreadable or unparsable
//! input, 3 for validation and precondition errors, 4 when a budget was
//! exceeded.

pub mod format;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::algebra;
use crate::automaton::{Nmda, Word};
use crate::decide::{self, Relation, Verdict, WordMode};
use crate::determinize::{determinize_with, SearchOptions};
use crate::error::Error;
use crate::eval;
use crate::games::{solve_min_dpg, Dpg};
use crate::gen::counter::reduce;
use crate::gen::fixtures::{fixtures, try_fixture};
use crate::gen::nfa::{hardness_gadget, nfa_to_nda, GadgetKind};
use crate::oracle;
use crate::rational::{fmt_rational, Rational};
use crate::tidy;

use format::{parse_machine, parse_nfa, parse_nmda, parse_transducer, write_nmda, write_transducer};

/// Exit status for computed results.
pub const EXIT_OK: i32 = 0;
/// Exit status for unreadable or unparsable input.
pub const EXIT_PARSE: i32 = 2;
/// Exit status for validation and precondition errors.
pub const EXIT_INVALID: i32 = 3;
/// Exit status when a budget was exceeded or the search was cancelled.
pub const EXIT_BUDGET: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "nmda", version, about = "Discounted-sum automata with multiple discount factors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Value of a finite word or a lasso word `prefix:cycle`.
    Eval {
        file: PathBuf,
        #[arg(long, conflicts_with = "lasso", required_unless_present = "lasso")]
        word: Option<String>,
        #[arg(long)]
        lasso: Option<String>,
    },
    /// Whether every run on a word ends with the same discount factor.
    Tidy { file: PathBuf },
    /// Whether the automaton follows the transducer's choice function.
    Compliance { file: PathBuf, transducer: PathBuf },
    /// The minimal transducer of a tidy automaton's choice function.
    TransducerOf { file: PathBuf },
    /// The equivalent deterministic automaton.
    Determinize {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Closure operations.
    #[command(subcommand)]
    Op(Op),
    /// Decision problems.
    #[command(subcommand)]
    Decide(Decide),
    /// Generated automata.
    #[command(subcommand)]
    Gen(Gen),
    /// Brute-force reference computations.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Args, Debug, Clone, Copy)]
struct SearchArgs {
    /// Maximal number of configurations to explore.
    #[arg(long)]
    budget: Option<usize>,
}

impl SearchArgs {
    fn options(self) -> SearchOptions {
        SearchOptions { budget: self.budget, cancel: None }
    }
}

#[derive(Subcommand, Debug)]
enum Op {
    /// Multiply every weight by a non-negative rational.
    Scale {
        file: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        factor: Rational,
    },
    /// The deterministic automaton of the negated values.
    Negate { file: PathBuf },
    /// Pointwise sum.
    Add { a: PathBuf, b: PathBuf },
    /// Pointwise difference.
    Sub { a: PathBuf, b: PathBuf },
    /// Pointwise minimum.
    Min { a: PathBuf, b: PathBuf },
    /// Pointwise maximum.
    Max { a: PathBuf, b: PathBuf },
    /// The constant automaton of a choice function.
    Const {
        transducer: PathBuf,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        value: Rational,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct ModeArg {
    /// Word mode: finite or infinite.
    #[arg(long, value_parser = mode_arg, default_value = "finite")]
    mode: WordMode,
}

#[derive(Subcommand, Debug)]
enum Decide {
    /// Whether some word has value `rel` the threshold.
    Nonempty {
        file: PathBuf,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        threshold: Rational,
        #[arg(long, value_parser = relation_arg)]
        rel: Relation,
        #[command(flatten)]
        mode: ModeArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Whether `A(w) rel B(w)` for every word.
    Contain {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_parser = relation_arg)]
        rel: Relation,
        #[command(flatten)]
        mode: ModeArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Whether both automata agree on every word.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        mode: ModeArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Whether every word has value `rel` the threshold.
    Universal {
        file: PathBuf,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        threshold: Rational,
        #[arg(long, value_parser = relation_arg)]
        rel: Relation,
        #[command(flatten)]
        mode: ModeArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Whether some word has exactly the threshold as value.
    Exact {
        file: PathBuf,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        threshold: Rational,
        #[command(flatten)]
        mode: ModeArg,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// The single-factor automaton whose sign encodes NFA membership.
    Nfa2nda {
        nfa: PathBuf,
        #[arg(long, default_value_t = 2)]
        lambda: u32,
    },
    /// A hardness gadget: eq-finite, eq-infinite or exact-finite.
    Gadget {
        nfa: PathBuf,
        #[arg(long)]
        kind: String,
    },
    /// The automata of the counter-machine reduction.
    CmReduce {
        machine: PathBuf,
        /// Also evaluate both automata on the machine's trace of at most this many steps.
        #[arg(long)]
        trace: Option<usize>,
    },
    /// A built-in fixture by name, or the list of names.
    Fixture { name: Option<String> },
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    /// Every run on a word with its value.
    Runs {
        file: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Brute-force values of the automaton's game, compared with policy iteration.
    Dpg { file: PathBuf },
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    crate::rational::parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational"))
}

fn relation_arg(s: &str) -> std::result::Result<Relation, String> {
    s.parse()
}

fn mode_arg(s: &str) -> std::result::Result<WordMode, String> {
    s.parse()
}

/// The exit status of an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        Error::BudgetExceeded(_) | Error::Cancelled => EXIT_BUDGET,
        _ => EXIT_INVALID,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Invalid(_) => "invalid",
        Error::AlphabetMismatch => "alphabet_mismatch",
        Error::UnknownLetter(_) => "unknown_letter",
        Error::InvalidWalk(_) => "invalid_walk",
        Error::EmptyCycle => "empty_cycle",
        Error::NotTidy { .. } => "not_tidy",
        Error::NotIntegral => "not_integral",
        Error::NegativeScalar => "negative_scalar",
        Error::IncompatibleChoiceFunctions { .. } => "incompatible_choice_functions",
        Error::NoDiscountDefined => "no_discount_defined",
        Error::BudgetExceeded(_) => "budget_exceeded",
        Error::Cancelled => "cancelled",
        Error::UnsupportedRelation(_) => "unsupported_relation",
        Error::LpUnbounded => "lp_unbounded",
        Error::InvalidGame(_) => "invalid_game",
        Error::InvalidMachine(_) => "invalid_machine",
        Error::Parse { .. } => "parse",
    }
}

enum Failure {
    Io(PathBuf, std::io::Error),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn read(path: &PathBuf) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.clone(), e))
}

fn load(path: &PathBuf) -> std::result::Result<Nmda, Failure> {
    Ok(parse_nmda(&read(path)?)?)
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    match execute(cli.command) {
        Ok(mut doc) => {
            let stats = doc.entry("stats").or_insert_with(|| json!({}));
            if let Value::Object(s) = stats {
                s.insert("elapsed_ms".into(), json!(start.elapsed().as_millis() as u64));
            }
            println!("{}", Value::Object(doc));
            EXIT_OK
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            println!("{}", json!({"error": format!("cannot read {}: {e}", path.display()), "kind": "io"}));
            EXIT_PARSE
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            println!("{}", json!({"error": e.to_string(), "kind": error_kind(&e)}));
            exit_code(&e)
        }
    }
}

type Doc = Map<String, Value>;

fn doc(pairs: Value) -> Doc {
    match pairs {
        Value::Object(m) => m,
        _ => unreachable!("documents are objects"),
    }
}

fn verdict_doc(a: &Nmda, v: &Verdict, key: &str) -> Doc {
    doc(json!({
        "answer": v.holds,
        key: v.holds,
        "witness": v.witness.as_ref().map(|w| w.render(a.alphabet())),
        "stats": {"configurations": v.explored},
    }))
}

fn automaton_doc(a: &Nmda, kind: &str) -> Doc {
    doc(json!({
        "answer": kind,
        "automaton": write_nmda(a, kind),
        "stats": {"states": a.num_states(), "transitions": a.transitions().len(), "configurations": a.num_states()},
    }))
}

fn execute(command: Command) -> std::result::Result<Doc, Failure> {
    match command {
        Command::Eval { file, word, lasso } => {
            let a = load(&file)?;
            let value = if let Some(lasso) = lasso {
                let w = a.alphabet().parse_lasso(&lasso)?;
                match eval::lasso_value(&a, &w) {
                    Err(Error::NotTidy { .. }) => crate::games::lasso_value_dpg(&a, &w)?,
                    other => other?,
                }
            } else {
                let w: Word = a.alphabet().parse_word(word.as_deref().unwrap_or(""))?;
                eval::word_value(&a, &w)?
            };
            let v = fmt_rational(&value);
            Ok(doc(json!({"answer": v, "value": v})))
        }
        Command::Tidy { file } => {
            let a = load(&file)?;
            Ok(verdict_doc(&a, &tidy::is_tidy(&a), "tidy"))
        }
        Command::Compliance { file, transducer } => {
            let a = load(&file)?;
            let t = parse_transducer(&read(&transducer)?)?;
            Ok(verdict_doc(&a, &tidy::is_compliant(&a, &t)?, "compliant"))
        }
        Command::TransducerOf { file } => {
            let t = tidy::choice_transducer_of(&load(&file)?)?;
            Ok(doc(json!({
                "answer": "TRANSDUCER",
                "transducer": write_transducer(&t),
                "stats": {"states": t.num_states()},
            })))
        }
        Command::Determinize { file, search } => {
            let d = determinize_with(&load(&file)?, &search.options())?;
            Ok(automaton_doc(&d, "DMDA"))
        }
        Command::Op(op) => op_command(op),
        Command::Decide(d) => decide_command(d),
        Command::Gen(g) => gen_command(g),
        Command::Oracle(o) => oracle_command(o),
    }
}

fn op_command(op: Op) -> std::result::Result<Doc, Failure> {
    let (result, kind) = match op {
        Op::Scale { file, factor } => (algebra::scale(&load(&file)?, &factor)?, "NMDA"),
        Op::Negate { file } => (algebra::negate(&load(&file)?)?.into_nmda(), "DMDA"),
        Op::Add { a, b } => (algebra::add(&load(&a)?, &load(&b)?)?, "NMDA"),
        Op::Sub { a, b } => (algebra::subtract(&load(&a)?, &load(&b)?)?, "NMDA"),
        Op::Min { a, b } => (algebra::min_union(&load(&a)?, &load(&b)?)?, "NMDA"),
        Op::Max { a, b } => (algebra::max(&load(&a)?, &load(&b)?)?.into_nmda(), "DMDA"),
        Op::Const { transducer, value } => {
            let t = parse_transducer(&read(&transducer)?)?;
            (algebra::const_automaton(&t, &value).into_nmda(), "DMDA")
        }
    };
    Ok(automaton_doc(&result, kind))
}

fn decide_command(d: Decide) -> std::result::Result<Doc, Failure> {
    let (a, v) = match d {
        Decide::Nonempty { file, threshold, rel, mode, search } => {
            let a = load(&file)?;
            let v = decide::nonempty_with(&a, &threshold, rel, mode.mode, &search.options())?;
            (a, v)
        }
        Decide::Contain { a, b, rel, mode, search } => {
            let a = load(&a)?;
            let v = decide::contain_with(&a, &load(&b)?, rel, mode.mode, &search.options())?;
            (a, v)
        }
        Decide::Equiv { a, b, mode, search } => {
            let a = load(&a)?;
            let v = decide::equivalent_with(&a, &load(&b)?, mode.mode, &search.options())?;
            (a, v)
        }
        Decide::Universal { file, threshold, rel, mode, search } => {
            let a = load(&file)?;
            let v = decide::universal_with(&a, &threshold, rel, mode.mode, &search.options())?;
            (a, v)
        }
        Decide::Exact { file, threshold, mode, search } => {
            let a = load(&file)?;
            let v = decide::exact_value_with(&a, &threshold, mode.mode, &search.options())?;
            (a, v)
        }
    };
    let mut out = verdict_doc(&a, &v, "holds");
    if let Some(w) = &v.witness {
        if let Ok(value) = decide::witness_value(&a, w) {
            out.insert("value".into(), json!(fmt_rational(&value)));
        }
    }
    Ok(out)
}

fn gen_command(g: Gen) -> std::result::Result<Doc, Failure> {
    match g {
        Gen::Nfa2nda { nfa, lambda } => {
            let n = parse_nfa(&read(&nfa)?)?;
            Ok(automaton_doc(&nfa_to_nda(&n, lambda)?, "NMDA"))
        }
        Gen::Gadget { nfa, kind } => {
            let kind: GadgetKind = kind.parse()?;
            let n = parse_nfa(&read(&nfa)?)?;
            Ok(automaton_doc(&hardness_gadget(&n, kind)?, "NMDA"))
        }
        Gen::CmReduce { machine, trace } => {
            let m = parse_machine(&read(&machine)?)?;
            let r = reduce(&m);
            let mut out = doc(json!({
                "answer": "REDUCTION",
                "a": write_nmda(&r.a, "DMDA"),
                "b": write_nmda(&r.b, "NMDA"),
                "stats": {"letters": r.a.alphabet().len(), "b_states": r.b.num_states()},
            }));
            if let Some(steps) = trace {
                let run = m.execute(steps);
                let a = eval::word_value(&r.a, &run.trace)?;
                let b = eval::word_value(&r.b, &run.trace)?;
                let letters: Vec<&str> = run.trace.iter().map(|&l| r.a.alphabet().name(l)).collect();
                out.insert("trace".into(), json!(letters.join(",")));
                out.insert("zero_halted".into(), json!(run.zero_halted()));
                out.insert("value_a".into(), json!(fmt_rational(&a)));
                out.insert("value_b".into(), json!(fmt_rational(&b)));
                out.insert("b_exceeds_a".into(), json!(b > a));
            }
            Ok(out)
        }
        Gen::Fixture { name: None } => {
            let names: Vec<&str> = fixtures().iter().map(|f| f.name).collect();
            Ok(doc(json!({"answer": names, "fixtures": names})))
        }
        Gen::Fixture { name: Some(name) } => {
            let f = try_fixture(&name)
                .ok_or_else(|| Error::Parse { line: 0, message: format!("no fixture named `{name}`") })?;
            Ok(doc(json!({"answer": f.name, "document": f.text})))
        }
    }
}

fn oracle_command(o: OracleCmd) -> std::result::Result<Doc, Failure> {
    match o {
        OracleCmd::Runs { file, word } => {
            let a = load(&file)?;
            let w = a.alphabet().parse_word(&word)?;
            let runs = oracle::enumerate_runs(&a, &w)?;
            let list: Vec<Value> = runs
                .iter()
                .map(|(run, value)| {
                    let mut states = vec![a.state_name(run.start).to_string()];
                    states.extend(run.transitions.iter().map(|&i| a.state_name(a.transition(i).target).to_string()));
                    json!({"states": states, "value": fmt_rational(value)})
                })
                .collect();
            let min = runs.iter().map(|(_, v)| v).min().map(fmt_rational);
            Ok(doc(json!({"answer": min, "value": min, "runs": list, "stats": {"runs": runs.len()}})))
        }
        OracleCmd::Dpg { file } => {
            let a = load(&file)?;
            let g = Dpg::from_nmda(&a);
            let brute = oracle::brute_dpg(&g)?;
            let solved = solve_min_dpg(&g);
            let values: Map<String, Value> = g
                .vertices()
                .iter()
                .zip(&brute)
                .map(|(v, x)| (v.clone(), json!(fmt_rational(x))))
                .collect();
            let agree = brute == solved.values;
            Ok(doc(json!({"answer": agree, "agree": agree, "values": values})))
        }
    }
}
