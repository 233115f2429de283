//! C interface to `isopoly`.
//!
//! Every fallible function returns an [`IsopolyStatus`]. On failure the
//! message is available from [`isopoly_last_error`] on the same thread until
//! the next call. Strings handed out by the library are freed with
//! [`isopoly_string_free`], formulas with [`isopoly_formula_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use isopoly::explog::{enf_capped, gl_member, level};
use isopoly::hsi::{prove_equal_capped, DEFAULT_NODE_CAP};
use isopoly::semantics::{eval, search_counterexample, Assignment, SearchBudget, Verdict};
use isopoly::syntax::{parse, print, rename_apart_term, to_term};
use isopoly::{Error, Formula, SyntaxFlavor};

/// Result of a library call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsopolyStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not UTF-8.
    InvalidUtf8 = 2,
    /// A formula did not parse.
    SyntaxError = 3,
    /// Well-formed input the operation does not accept.
    InvalidInput = 4,
    /// A value, set or normal form grew past its limit.
    ResourceLimit = 5,
    /// The library panicked. This is a bug.
    InternalError = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsopolyFlavor {
    /// `T`, `->`, `|`, `&`, `all x.`, `ex x.`
    Logical = 0,
    /// `1`, `^`, `+`, `*`
    Algebraic = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsopolyVerdict {
    Proved = 0,
    Disproved = 1,
    Inconclusive = 2,
}

/// A parsed formula.
pub struct IsopolyFormula(Formula);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(IsopolyStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Syntax { .. } | Error::Unbound { .. } => IsopolyStatus::SyntaxError,
            Error::Overflow(_) | Error::TooLarge { .. } | Error::SizeGuard { .. } => IsopolyStatus::ResourceLimit,
            _ => IsopolyStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

/// Runs `body`, recording any failure as the thread's last error.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> IsopolyStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => IsopolyStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            IsopolyStatus::InternalError
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(IsopolyStatus::NullArgument, format!("{what} is null"))
}

/// # Safety
/// `p` is null or a nul-terminated string.
unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(IsopolyStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `p` is null or came from this library and was not freed.
unsafe fn formula<'a>(p: *const IsopolyFormula, what: &str) -> Result<&'a Formula, Failure> {
    p.as_ref().map(|f| &f.0).ok_or_else(|| null(what))
}

/// Writes `make()` to `out`; nothing is allocated when `out` is null.
///
/// # Safety
/// `out` is null or writable.
unsafe fn put<T>(out: *mut T, make: impl FnOnce() -> T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(make());
    Ok(())
}

fn owned(s: String) -> *mut c_char {
    CString::new(s).expect("library strings have no nul").into_raw()
}

fn flavor(f: IsopolyFlavor) -> SyntaxFlavor {
    match f {
        IsopolyFlavor::Logical => SyntaxFlavor::Logical,
        IsopolyFlavor::Algebraic => SyntaxFlavor::Algebraic,
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn isopoly_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn isopoly_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn isopoly_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `text` and stores a new formula in `*out`.
///
/// # Safety
/// `text` is a nul-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn isopoly_formula_parse(
    text_: *const c_char,
    syntax: IsopolyFlavor,
    out: *mut *mut IsopolyFormula,
) -> IsopolyStatus {
    guard(|| {
        let f = parse(text(text_, "text")?, flavor(syntax))?;
        put(out, || Box::into_raw(Box::new(IsopolyFormula(f))))
    })
}

/// Frees a formula. Null is ignored.
///
/// # Safety
/// `f` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn isopoly_formula_free(f: *mut IsopolyFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Prints `f` in the given syntax into a new string.
///
/// # Safety
/// `f` is a live formula and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn isopoly_formula_print(
    f: *const IsopolyFormula,
    syntax: IsopolyFlavor,
    out: *mut *mut c_char,
) -> IsopolyStatus {
    guard(|| {
        let s = print(formula(f, "formula")?, flavor(syntax))?;
        put(out, || owned(s))
    })
}

/// Value of `f` as a decimal string. `at` assigns atoms (`a=2,P(0)=3`);
/// `domain` is null, a size (`3`), or per-variable sizes (`x=2,y=3`).
///
/// # Safety
/// `f` is a live formula, `at` a string, `domain` null or a string, and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isopoly_formula_eval(
    f: *const IsopolyFormula,
    at: *const c_char,
    domain: *const c_char,
    out: *mut *mut c_char,
) -> IsopolyStatus {
    guard(|| {
        let f = formula(f, "formula")?;
        let mut a = Assignment::new();
        a.parse_values(text(at, "at")?)?;
        if !domain.is_null() {
            a.parse_domains(text(domain, "domain")?)?;
        }
        let v = eval(&to_term(f), &a)?;
        put(out, || owned(v.to_string()))
    })
}

/// Exp-log normal form of `f` as a new formula.
///
/// # Safety
/// `f` is a live formula and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn isopoly_formula_enf(f: *const IsopolyFormula, out: *mut *mut IsopolyFormula) -> IsopolyStatus {
    guard(|| {
        let r = enf_capped(formula(f, "formula")?, DEFAULT_NODE_CAP)?;
        put(out, || Box::into_raw(Box::new(IsopolyFormula(r.normal))))
    })
}

/// Hierarchy level of `f`, such as `Σ1` or `Π2`, as a new string.
///
/// # Safety
/// `f` is a live formula and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn isopoly_formula_level(f: *const IsopolyFormula, out: *mut *mut c_char) -> IsopolyStatus {
    guard(|| {
        let l = level(formula(f, "formula")?)?;
        put(out, || owned(l.to_string()))
    })
}

/// Whether the propositional formula `f` lies in the Gurevič–Levitz class.
///
/// # Safety
/// `f` is a live formula and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn isopoly_formula_gl_member(f: *const IsopolyFormula, out: *mut bool) -> IsopolyStatus {
    guard(|| {
        let m = gl_member(formula(f, "formula")?)?;
        put(out, || m.in_class)
    })
}

/// Searches for a counterexample, then for a derivation, as `iso-check`
/// does. `budget` is null for the default or text like `B=4,D=3,N=10000`.
///
/// # Safety
/// `lhs` and `rhs` are live formulas, `budget` null or a string, and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn isopoly_iso_check(
    lhs: *const IsopolyFormula,
    rhs: *const IsopolyFormula,
    budget: *const c_char,
    seed: u64,
    out: *mut IsopolyVerdict,
) -> IsopolyStatus {
    guard(|| {
        let (f, g) = (formula(lhs, "lhs")?, formula(rhs, "rhs")?);
        let mut b = if budget.is_null() {
            SearchBudget::default()
        } else {
            SearchBudget::parse(text(budget, "budget")?)?
        };
        b.seed = Some(seed);
        let verdict = match search_counterexample(f, g, &b)? {
            Verdict::Counterexample { .. } => IsopolyVerdict::Disproved,
            _ => {
                let (t1, t2) = (rename_apart_term(&to_term(f)), rename_apart_term(&to_term(g)));
                match prove_equal_capped(&t1, &t2, DEFAULT_NODE_CAP) {
                    Ok(Some(_)) => IsopolyVerdict::Proved,
                    Ok(None) | Err(Error::SizeGuard { .. }) => IsopolyVerdict::Inconclusive,
                    Err(e) => return Err(e.into()),
                }
            }
        };
        put(out, || verdict)
    })
}
