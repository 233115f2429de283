//! Golden-file cases for the `isopoly` binary.
//!
//! A golden file holds stdout, then stderr when non-empty, then the exit
//! status. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;
use std::process::Command;

/// `(name, argv)`; every subcommand appears at least once.
pub const CASES: &[(&str, &[&str])] = &[
    ("parse", &["parse", "a & b -> c"]),
    ("parse_first_order", &["parse", "all x. P(x) -> ex y. Q(y)", "--json"]),
    ("parse_algebraic", &["--flavor", "algebraic", "parse", "c ^ (a * b) + 1"]),
    ("parse_error", &["parse", "a & (b"]),
    ("eval", &["eval", "a & b -> c", "--at", "a=2,b=3,c=2"]),
    ("eval_first_order", &["eval", "all x. P(x) | a", "--at", "P=2,a=1", "--domain", "3", "--json"]),
    ("eval_unassigned", &["eval", "a & b", "--at", "a=2"]),
    ("iso_check_disproved", &["iso-check", "a & a", "a"]),
    ("iso_check_proved", &["iso-check", "(a | b) -> c", "(a -> c) & (b -> c)", "--json"]),
    ("iso_prove", &["iso-prove", "(a | b) -> c", "(a -> c) & (b -> c)"]),
    ("iso_prove_inconclusive", &["iso-prove", "a & a", "a"]),
    ("iso_disprove", &["iso-disprove", "a -> b", "b -> a", "--json"]),
    ("iso_disprove_inconclusive", &["iso-disprove", "a | b", "b | a", "--budget", "B=2,N=50", "--seed", "7"]),
    ("iso_disprove_first_order", &["iso-disprove", "all x. P(x) & Q(x)", "(all x. P(x)) & a", "--json"]),
    ("enf", &["enf", "(a | b) -> c"]),
    ("enf_first_order", &["enf", "(ex x. P(x)) -> Q", "--json"]),
    ("enf_batch", &["enf", "--batch", "tests/fixtures/explog_batch.txt"]),
    ("level", &["level", "all x. ex y. P(x,y)", "--json"]),
    ("level_atom", &["level", "P"]),
    ("glclass_in", &["glclass", "a -> b -> (T | T)"]),
    ("glclass_out", &["glclass", "a -> b -> c", "--json"]),
    ("prenex_level", &["prenex-level", "ex x. all y. ex z. P(x,y,z)"]),
    ("prenex_level_not_prenex", &["prenex-level", "(all x. P(x)) -> Q", "--json"]),
    ("witness_verify_enf", &["witness-verify", "(a | b) -> c"]),
    ("witness_verify_proof", &["witness-verify", "a & (b | c)", "a & b | a & c", "--json"]),
    ("witness_verify_first_order", &["witness-verify", "(ex x. P(x)) -> Q", "--sizes", "1,2"]),
    ("selftest", &["selftest"]),
    ("martin_iso_check", &["iso-check", "@tests/fixtures/martin_lhs.txt", "@tests/fixtures/martin_rhs.txt", "--json"]),
    ("usage_error", &["iso-check", "--budget", "B=0", "a", "a"]),
];

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Runs the binary and renders what a golden file stores.
pub fn render(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_isopoly"))
        .args(args)
        .current_dir(manifest_dir())
        .env_remove("ISOPOLY_CAP")
        .output()
        .expect("run isopoly");
    let mut s = String::from_utf8(out.stdout).expect("utf-8 stdout");
    let err = String::from_utf8(out.stderr).expect("utf-8 stderr");
    if !err.is_empty() {
        s.push_str("--- stderr\n");
        s.push_str(&err);
    }
    s.push_str(&format!("--- exit {}\n", out.status.code().unwrap_or(-1)));
    s
}

/// Compares every case with its golden file; returns the names that differ.
pub fn mismatches() -> Vec<String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut bad = Vec::new();
    for (name, args) in CASES {
        let path = manifest_dir().join("tests/golden").join(format!("{name}.out"));
        let got = render(args);
        if update {
            std::fs::write(&path, &got).expect("write golden file");
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(want) if want == got => {}
            _ => bad.push(name.to_string()),
        }
    }
    bad
}
