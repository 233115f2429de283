use std::ffi::{c_char, CStr, CString};
use std::ptr;

use isopoly_ffi::*;

fn parse(s: &str) -> *mut IsopolyFormula {
    let text = CString::new(s).unwrap();
    let mut f = ptr::null_mut();
    let st = unsafe { isopoly_formula_parse(text.as_ptr(), IsopolyFlavor::Logical, &mut f) };
    assert_eq!(st, IsopolyStatus::Ok, "{s}");
    f
}

/// Takes ownership of a library string.
fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { isopoly_string_free(s) };
    out
}

fn last_error() -> Option<String> {
    let p = isopoly_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string())
}

#[test]
fn parse_print_and_eval() {
    let f = parse("a & b -> c");
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(isopoly_formula_print(f, IsopolyFlavor::Algebraic, &mut s), IsopolyStatus::Ok);
        assert_eq!(take(s), "c ^ (a * b)");
        let at = CString::new("a=2,b=3,c=2").unwrap();
        assert_eq!(isopoly_formula_eval(f, at.as_ptr(), ptr::null(), &mut s), IsopolyStatus::Ok);
        assert_eq!(take(s), "64");
        isopoly_formula_free(f);
    }
    assert_eq!(last_error(), None);
}

#[test]
fn first_order_eval_takes_a_domain() {
    let f = parse("all x. P(x) | a");
    let (at, dom) = (CString::new("P=2,a=1").unwrap(), CString::new("3").unwrap());
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(isopoly_formula_eval(f, at.as_ptr(), dom.as_ptr(), &mut s), IsopolyStatus::Ok);
        assert_eq!(take(s), "27");
        isopoly_formula_free(f);
    }
}

#[test]
fn errors_set_status_and_message() {
    let text = CString::new("a & (b").unwrap();
    let mut f = ptr::null_mut();
    let st = unsafe { isopoly_formula_parse(text.as_ptr(), IsopolyFlavor::Logical, &mut f) };
    assert_eq!(st, IsopolyStatus::SyntaxError);
    assert!(f.is_null());
    assert!(last_error().unwrap().starts_with("syntax error at 1:"));

    let g = parse("a");
    let st = unsafe { isopoly_formula_print(g, IsopolyFlavor::Logical, ptr::null_mut()) };
    assert_eq!(st, IsopolyStatus::NullArgument);
    let st = unsafe { isopoly_formula_print(ptr::null(), IsopolyFlavor::Logical, &mut ptr::null_mut()) };
    assert_eq!(st, IsopolyStatus::NullArgument);

    let bad = [0xffu8, 0];
    let st = unsafe { isopoly_formula_parse(bad.as_ptr().cast(), IsopolyFlavor::Logical, &mut f) };
    assert_eq!(st, IsopolyStatus::InvalidUtf8);

    let at = CString::new("").unwrap();
    let mut s = ptr::null_mut();
    let st = unsafe { isopoly_formula_eval(g, at.as_ptr(), ptr::null(), &mut s) };
    assert_eq!(st, IsopolyStatus::InvalidInput);
    assert_eq!(last_error().unwrap(), "no value assigned to `a`");

    // A successful call clears the message.
    unsafe { isopoly_formula_print(g, IsopolyFlavor::Logical, &mut s) };
    assert_eq!(take(s), "a");
    assert_eq!(last_error(), None);
    unsafe { isopoly_formula_free(g) };
}

#[test]
fn huge_values_are_resource_errors() {
    let f = parse("(a -> a) -> (a -> a) -> a");
    let at = CString::new("a=9").unwrap();
    let mut s = ptr::null_mut();
    let st = unsafe { isopoly_formula_eval(f, at.as_ptr(), ptr::null(), &mut s) };
    assert_eq!(st, IsopolyStatus::ResourceLimit, "{:?}", last_error());
    unsafe { isopoly_formula_free(f) };
}

#[test]
fn explog_queries() {
    let f = parse("(ex x. P(x)) -> Q");
    let mut n = ptr::null_mut();
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(isopoly_formula_enf(f, &mut n), IsopolyStatus::Ok);
        assert_eq!(isopoly_formula_print(n, IsopolyFlavor::Logical, &mut s), IsopolyStatus::Ok);
        assert_eq!(take(s), "all x. (T -> P(x)) -> Q");
        assert_eq!(isopoly_formula_level(f, &mut s), IsopolyStatus::Ok);
        assert_eq!(take(s), "Π1");
        let mut member = true;
        assert_eq!(isopoly_formula_gl_member(f, &mut member), IsopolyStatus::InvalidInput);
        isopoly_formula_free(n);
        isopoly_formula_free(f);
    }
    for (text, want) in [("a -> b -> (T | T)", true), ("a -> b -> c", false)] {
        let g = parse(text);
        let mut member = !want;
        unsafe {
            assert_eq!(isopoly_formula_gl_member(g, &mut member), IsopolyStatus::Ok);
            isopoly_formula_free(g);
        }
        assert_eq!(member, want, "{text}");
    }
}

#[test]
fn iso_check_verdicts() {
    for (l, r, want) in [
        ("a & a", "a", IsopolyVerdict::Disproved),
        ("(a | b) -> c", "(a -> c) & (b -> c)", IsopolyVerdict::Proved),
    ] {
        let (f, g) = (parse(l), parse(r));
        let mut v = IsopolyVerdict::Inconclusive;
        unsafe {
            assert_eq!(isopoly_iso_check(f, g, ptr::null(), 0, &mut v), IsopolyStatus::Ok);
            isopoly_formula_free(f);
            isopoly_formula_free(g);
        }
        assert_eq!(v, want, "{l} vs {r}");
    }
    let (f, g) = (parse("a"), parse("a"));
    let budget = CString::new("B=0").unwrap();
    let mut v = IsopolyVerdict::Proved;
    unsafe {
        assert_eq!(isopoly_iso_check(f, g, budget.as_ptr(), 0, &mut v), IsopolyStatus::InvalidInput);
        isopoly_formula_free(f);
        isopoly_formula_free(g);
    }
}

#[test]
fn version_matches_the_crate() {
    let v = unsafe { CStr::from_ptr(isopoly_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// A C program using every function compiles against the generated
/// header, links against the shared library and runs.
#[test]
fn c_program_links_and_runs() {
    let Some(cc) = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler found; skipped");
        return;
    };
    // target/<profile>/deps/<test> -> target/<profile>
    let lib_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("use_header");
    let out = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/use_header.c"))
        .arg(concat!("-I", env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(format!("-L{}", lib_dir.display()))
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .arg("-lisopoly_ffi")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = std::process::Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{:?}", run);
    assert_eq!(String::from_utf8(run.stdout).unwrap(), format!("isopoly {}\n", env!("CARGO_PKG_VERSION")));
}
