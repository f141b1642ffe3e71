//! Calls through the C interface, from Rust and from a C program built
//! against the generated header.

use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use nmda_ffi::*;

const FIG3: &str = include_str!("../../core/fixtures/fig3.nmda");
const FIG2: &str = include_str!("../../core/fixtures/fig2.nmda");
const FIG10: &str = include_str!("../../core/fixtures/fig10_nda.nmda");

fn parse(text: &str) -> *mut NmdaAutomaton {
    let text = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nmda_automaton_parse(text.as_ptr(), &mut out) }, NmdaStatus::Ok);
    assert!(!out.is_null());
    out
}

fn take(s: *mut c_char) -> String {
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { nmda_string_free(s) };
    owned
}

fn last_error() -> Option<String> {
    let p = nmda_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn lasso_value_of_fig3() {
    let a = parse(FIG3);
    let lasso = CString::new("aaa:b").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nmda_lasso_value(a, lasso.as_ptr(), &mut out) }, NmdaStatus::Ok);
    assert_eq!(take(out), "15/16");
    assert_eq!(unsafe { nmda_automaton_num_states(a) }, 3);
    unsafe { nmda_automaton_free(a) };
}

#[test]
fn tidiness_and_determinization() {
    let fig2 = parse(FIG2);
    let mut tidy = true;
    assert_eq!(unsafe { nmda_is_tidy(fig2, &mut tidy) }, NmdaStatus::Ok);
    assert!(!tidy);
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { nmda_determinize(fig2, 0, &mut d) }, NmdaStatus::NotTidy);
    assert!(d.is_null());
    assert!(last_error().unwrap().contains("not tidy"));

    let fig10 = parse(FIG10);
    assert_eq!(unsafe { nmda_determinize(fig10, 2, &mut d) }, NmdaStatus::Budget);
    assert_eq!(unsafe { nmda_determinize(fig10, 0, &mut d) }, NmdaStatus::Ok);
    assert!(last_error().is_none());
    assert_eq!(unsafe { nmda_automaton_num_states(d) }, 5);
    let mut same = false;
    assert_eq!(unsafe { nmda_equivalent(fig10, d, NmdaMode::Finite, &mut same) }, NmdaStatus::Ok);
    assert!(same);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { nmda_automaton_to_string(d, &mut text) }, NmdaStatus::Ok);
    assert!(take(text).starts_with("DMDA"));
    unsafe {
        nmda_automaton_free(d);
        nmda_automaton_free(fig10);
        nmda_automaton_free(fig2);
    }
}

#[test]
fn errors_are_reported_as_statuses() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { nmda_automaton_parse(ptr::null(), &mut out) }, NmdaStatus::NullPointer);
    let bad = CString::new("NMDA\nalphabet: a\n").unwrap();
    assert_ne!(unsafe { nmda_automaton_parse(bad.as_ptr(), &mut out) }, NmdaStatus::Ok);
    assert!(last_error().is_some());
    let invalid = [0xffu8, 0];
    assert_eq!(
        unsafe { nmda_automaton_parse(invalid.as_ptr().cast(), &mut out) },
        NmdaStatus::InvalidUtf8
    );

    let a = parse(FIG3);
    let word = CString::new("z").unwrap();
    let mut value = ptr::null_mut();
    assert_eq!(unsafe { nmda_word_value(a, word.as_ptr(), &mut value) }, NmdaStatus::Parse);
    assert_eq!(unsafe { nmda_word_value(a, word.as_ptr(), ptr::null_mut()) }, NmdaStatus::Parse);
    let ok = CString::new("a").unwrap();
    assert_eq!(unsafe { nmda_word_value(a, ok.as_ptr(), ptr::null_mut()) }, NmdaStatus::NullPointer);
    let mut tidy = false;
    assert_eq!(unsafe { nmda_is_tidy(ptr::null(), &mut tidy) }, NmdaStatus::NullPointer);
    assert_eq!(unsafe { nmda_automaton_num_states(ptr::null()) }, 0);
    unsafe {
        nmda_automaton_free(ptr::null_mut());
        nmda_string_free(ptr::null_mut());
        nmda_automaton_free(a);
    }
}

#[test]
fn incompatible_automata() {
    let a = parse(include_str!("../../core/fixtures/fig4_a.nmda"));
    let b = parse(include_str!("../../core/fixtures/fig4_b.nmda"));
    let mut same = true;
    assert_eq!(unsafe { nmda_equivalent(a, b, NmdaMode::Infinite, &mut same) }, NmdaStatus::Incompatible);
    unsafe {
        nmda_automaton_free(a);
        nmda_automaton_free(b);
    }
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = crate_dir.join("include").join("nmda.h");
    assert!(std::fs::read_to_string(&header).unwrap().contains("nmda_automaton_parse"));
    let lib = target_dir().join("libnmda_ffi.a");
    assert!(lib.exists(), "{} is built with the crate", lib.display());
    let exe = std::env::temp_dir().join(format!("nmda_ffi_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler is installed");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    let _ = std::fs::remove_file(&exe);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
