mod common;

use std::io::Write;
use std::process::{Command, Stdio};

use isopoly::hsi::{replay, RewriteTrace};

fn isopoly() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_isopoly"));
    c.current_dir(env!("CARGO_MANIFEST_DIR")).env_remove("ISOPOLY_CAP");
    c
}

#[test]
fn golden_files_match() {
    let bad = common::golden::mismatches();
    assert!(bad.is_empty(), "golden mismatches (rerun with UPDATE_GOLDEN=1 to inspect): {bad:?}");
}

#[test]
fn output_is_reproducible() {
    for (_, args) in common::golden::CASES.iter().take(12) {
        assert_eq!(common::golden::render(args), common::golden::render(args), "{args:?}");
    }
}

#[test]
fn written_traces_replay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.json");
    let out = isopoly()
        .args(["iso-prove", "c ^ (a + b)", "c ^ b * c ^ a", "--flavor", "algebraic", "--trace"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let tr = RewriteTrace::from_json(&v).unwrap();
    assert!(!tr.steps.is_empty());
    replay(&tr).unwrap();
}

#[test]
fn node_cap_comes_from_the_environment() {
    let blow_up = "(a | b) & (c | a) & (b | c) -> (a | b) & (b | c) & (c | a)";
    let capped = isopoly().args(["iso-prove", blow_up, blow_up]).env("ISOPOLY_CAP", "5").output().unwrap();
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stdout).contains("node cap of 5"));
    let flag = isopoly()
        .args(["iso-prove", blow_up, blow_up, "--cap", "100000"])
        .env("ISOPOLY_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(flag.status.code(), Some(0));
}

#[test]
fn batch_reads_stdin_in_order() {
    let mut child = isopoly()
        .args(["iso-check", "--batch", "-", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"a | b ; b | a\n\na & a ; a\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let verdicts: Vec<String> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["verdict"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(verdicts, ["proved", "disproved"]);
}

#[test]
fn help_documents_every_flag() {
    let out = isopoly().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let help = String::from_utf8(out.stdout).unwrap();
    for flag in ["--flavor", "--budget", "--seed", "--json", "--trace", "--sizes", "--cap", "--batch", "ISOPOLY_CAP"] {
        assert!(help.contains(flag), "{flag} missing from --help");
    }
}
