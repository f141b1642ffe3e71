//! C interface to the `nmda` library.
//!
//! Automata are passed across the boundary as opaque `NmdaAutomaton`
//! handles created by [`nmda_automaton_parse`] or [`nmda_determinize`] and
//! released with [`nmda_automaton_free`]. Every fallible function returns an
//! [`NmdaStatus`]; on failure the message is available from
//! [`nmda_last_error`] on the same thread until the next call. Rationals and
//! rendered automata are returned as NUL-terminated strings owned by the
//! caller and released with [`nmda_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nmda::cli::format::{parse_nmda, write_nmda};
use nmda::decide::{self, WordMode};
use nmda::determinize::{determinize_with, SearchOptions};
use nmda::rational::fmt_rational;
use nmda::{eval, games, tidy, Error, Nmda};

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NmdaStatus {
    /// The call succeeded and its outputs were written.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The automaton text or a word could not be parsed.
    Parse = 3,
    /// The input violates a structural requirement or a precondition.
    Invalid = 4,
    /// The automaton is not tidy.
    NotTidy = 5,
    /// Two automata follow different choice functions.
    Incompatible = 6,
    /// A search exceeded its configuration budget.
    Budget = 7,
    /// The library panicked; the handle arguments are still valid.
    Panic = 8,
}

/// Word mode of a decision problem.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NmdaMode {
    /// Nonempty finite words.
    Finite = 0,
    /// Infinite words.
    Infinite = 1,
}

/// An automaton owned by the library.
pub struct NmdaAutomaton {
    inner: Nmda,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("interior NULs were replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &Error) -> NmdaStatus {
    match e {
        Error::Parse { .. } | Error::UnknownLetter(_) | Error::EmptyCycle => NmdaStatus::Parse,
        Error::NotTidy { .. } => NmdaStatus::NotTidy,
        Error::IncompatibleChoiceFunctions { .. } | Error::AlphabetMismatch => NmdaStatus::Incompatible,
        Error::BudgetExceeded(_) | Error::Cancelled => NmdaStatus::Budget,
        _ => NmdaStatus::Invalid,
    }
}

struct Failure(NmdaStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(NmdaStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> NmdaStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => NmdaStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal error: {message}"));
            NmdaStatus::Panic
        }
    }
}

/// # Safety
/// `s` is null or points to a NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| Failure(NmdaStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

/// # Safety
/// `a` is null or a live handle.
unsafe fn handle<'a>(a: *const NmdaAutomaton, what: &str) -> Result<&'a Nmda, Failure> {
    unsafe { a.as_ref() }.map(|h| &h.inner).ok_or_else(|| null(what))
}

/// # Safety
/// `out` is null or valid for writes.
unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    unsafe { out.write(value) };
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior NULs were replaced").into_raw()
}

fn boxed(inner: Nmda) -> *mut NmdaAutomaton {
    Box::into_raw(Box::new(NmdaAutomaton { inner }))
}

fn mode(m: NmdaMode) -> WordMode {
    match m {
        NmdaMode::Finite => WordMode::Finite,
        NmdaMode::Infinite => WordMode::Infinite,
    }
}

/// The message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn nmda_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses an `NMDA` or `DMDA` document into a new handle.
///
/// # Safety
/// `text` is a NUL-terminated string and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nmda_automaton_parse(text: *const c_char, out: *mut *mut NmdaAutomaton) -> NmdaStatus {
    guard(|| {
        let text = unsafe { read_str(text, "text") }?;
        if out.is_null() {
            return Err(null("out"));
        }
        let a = parse_nmda(text)?;
        unsafe { write(out, boxed(a), "out") }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `a` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nmda_automaton_free(a: *mut NmdaAutomaton) {
    if !a.is_null() {
        drop(unsafe { Box::from_raw(a) });
    }
}

/// Releases a string returned by the library; null is ignored.
///
/// # Safety
/// `s` is null or a string returned by the library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nmda_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// The number of states, or 0 for a null handle.
///
/// # Safety
/// `a` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nmda_automaton_num_states(a: *const NmdaAutomaton) -> usize {
    unsafe { a.as_ref() }.map_or(0, |h| h.inner.num_states())
}

/// Renders the automaton in the text format.
///
/// # Safety
/// `a` is a live handle and `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nmda_automaton_to_string(a: *const NmdaAutomaton, out: *mut *mut c_char) -> NmdaStatus {
    guard(|| {
        let a = unsafe { handle(a, "a") }?;
        let kind = if a.is_deterministic() { "DMDA" } else { "NMDA" };
        unsafe { write(out, owned_string(write_nmda(a, kind)), "out") }
    })
}

/// The value of a finite word, rendered `p/q`.
///
/// # Safety
/// `a` is a live handle, `word` a NUL-terminated string and `out` valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn nmda_word_value(
    a: *const NmdaAutomaton,
    word: *const c_char,
    out: *mut *mut c_char,
) -> NmdaStatus {
    guard(|| {
        let a = unsafe { handle(a, "a") }?;
        let word = a.alphabet().parse_word(unsafe { read_str(word, "word") }?)?;
        let value = eval::word_value(a, &word)?;
        unsafe { write(out, owned_string(fmt_rational(&value)), "out") }
    })
}

/// The value of a lasso word `prefix:cycle`, rendered `p/q`. Automata that
/// are not tidy are evaluated through the product game.
///
/// # Safety
/// `a` is a live handle, `lasso` a NUL-terminated string and `out` valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn nmda_lasso_value(
    a: *const NmdaAutomaton,
    lasso: *const c_char,
    out: *mut *mut c_char,
) -> NmdaStatus {
    guard(|| {
        let a = unsafe { handle(a, "a") }?;
        let w = a.alphabet().parse_lasso(unsafe { read_str(lasso, "lasso") }?)?;
        let value = match eval::lasso_value(a, &w) {
            Err(Error::NotTidy { .. }) => games::lasso_value_dpg(a, &w)?,
            other => other?,
        };
        unsafe { write(out, owned_string(fmt_rational(&value)), "out") }
    })
}

/// Whether every run on a word ends with the same discount factor.
///
/// # Safety
/// `a` is a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nmda_is_tidy(a: *const NmdaAutomaton, out: *mut bool) -> NmdaStatus {
    guard(|| {
        let a = unsafe { handle(a, "a") }?;
        unsafe { write(out, tidy::is_tidy(a).holds, "out") }
    })
}

/// Determinizes a tidy integral automaton into a new handle. A `budget` of
/// zero means no limit on the number of configurations.
///
/// # Safety
/// `a` is a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nmda_determinize(
    a: *const NmdaAutomaton,
    budget: usize,
    out: *mut *mut NmdaAutomaton,
) -> NmdaStatus {
    guard(|| {
        let a = unsafe { handle(a, "a") }?;
        if out.is_null() {
            return Err(null("out"));
        }
        let options = if budget == 0 { SearchOptions::default() } else { SearchOptions::with_budget(budget) };
        let d = determinize_with(a, &options)?;
        unsafe { write(out, boxed(d.into_nmda()), "out") }
    })
}

/// Whether both automata agree on every word of the mode.
///
/// # Safety
/// `a` and `b` are live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nmda_equivalent(
    a: *const NmdaAutomaton,
    b: *const NmdaAutomaton,
    word_mode: NmdaMode,
    out: *mut bool,
) -> NmdaStatus {
    guard(|| {
        let (a, b) = unsafe { (handle(a, "a")?, handle(b, "b")?) };
        let v = decide::equivalent(a, b, mode(word_mode))?;
        unsafe { write(out, v.holds, "out") }
    })
}
