//! The `isopoly` command line.
//!
//! [`run`] parses arguments, dispatches to a command and writes either text
//! or one JSON [`Envelope`] per result. Outputs depend only on the arguments
//! (and `ISOPOLY_CAP`), so equal invocations print equal bytes.

mod args;
mod commands;

use std::io::{BufRead, Write};

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

pub use args::{Cli, Command, Flavor, Global};
pub use commands::Verdict;

use crate::error::{Error, Result};
use crate::hsi::{AxiomId, Direction, Subst, DEFAULT_NODE_CAP};
use crate::semantics::{eval, Assignment, SearchBudget};
use crate::syntax::{parse, parse_term, to_term, SyntaxFlavor};
use crate::witness::{axiom_witness, probe_models, verify_roundtrip};
use commands::{Ctx, Outcome};

/// One result line under `--json`.
#[derive(Debug, Serialize)]
pub struct Envelope {
    pub command: String,
    pub inputs: Vec<String>,
    pub verdict: Verdict,
    pub data: Value,
    pub budget: Value,
    pub version: String,
}

/// The Martin pair, with χᵢ written `x1`…`x4`.
pub const MARTIN_LHS: &str = "(x4 -> (x3 -> x1) | (x3 -> x1)) & (x3 -> (x4 -> x2) | (x4 -> x2))";
pub const MARTIN_RHS: &str = "(x3 -> (x4 -> x1) | (x4 -> x1)) & (x4 -> (x3 -> x2) | (x3 -> x2))";

/// Runs one invocation and returns the exit status.
pub fn run<I, T>(argv: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return 3;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    match execute(&cli, stdin, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            3
        }
    }
}

fn node_cap(flag: Option<usize>) -> Result<usize> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var("ISOPOLY_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("ISOPOLY_CAP must be a node count, got `{v}`"))),
        Err(_) => Ok(DEFAULT_NODE_CAP),
    }
}

/// `@FILE` arguments are replaced by the file's contents.
fn resolve(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Error::Invalid(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn execute(cli: &Cli, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    let mut budget = SearchBudget::parse(&g.budget)?;
    budget.seed = Some(g.seed);
    let cap = node_cap(g.cap)?;
    if g.sizes.is_empty() || g.sizes.contains(&0) {
        return Err(Error::Invalid("--sizes takes positive sizes".into()));
    }
    let ctx = Ctx {
        flavor: g.flavor.into(),
        budget,
        cap,
        sizes: &g.sizes,
        trace: g.trace.as_deref(),
    };
    let budget_json = json!({
        "B": budget.max_value,
        "D": budget.max_domain,
        "N": budget.max_assignments,
        "seed": g.seed,
        "cap": cap,
    });
    let io = |e: std::io::Error| Error::Invalid(format!("output failed: {e}"));

    let Some(batch) = &g.batch else {
        let inputs = cli
            .command
            .inputs()
            .iter()
            .map(|a| resolve(a))
            .collect::<Result<Vec<_>>>()?;
        let outcome = dispatch(&ctx, &cli.command, &inputs)?;
        emit(cli, &inputs, &outcome, &budget_json, out, err).map_err(io)?;
        return Ok(outcome.verdict.exit_code());
    };

    if !cli.command.inputs().is_empty() {
        return Err(Error::Invalid("--batch replaces positional formulas".into()));
    }
    let text = if batch.as_os_str() == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(io)?;
        s
    } else {
        std::fs::read_to_string(batch).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", batch.display())))?
    };
    let lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let mut worst = Verdict::Ok;
    for line in lines {
        if cli.command.is_explog() {
            let rec = commands::explog_record(&ctx, line);
            worst = worst.max(if rec.get("error").is_some() { Verdict::Error } else { Verdict::Ok });
            writeln!(out, "{rec}").map_err(io)?;
            continue;
        }
        let inputs: Vec<String> = line.split(';').map(|s| s.trim().to_string()).collect();
        let outcome = dispatch(&ctx, &cli.command, &inputs)?;
        worst = worst.max(outcome.verdict);
        emit(cli, &inputs, &outcome, &budget_json, out, err).map_err(io)?;
    }
    Ok(worst.exit_code())
}

fn emit(
    cli: &Cli,
    inputs: &[String],
    o: &Outcome,
    budget: &Value,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<()> {
    if cli.global.json {
        let env = Envelope {
            command: cli.command.name().to_string(),
            inputs: inputs.to_vec(),
            verdict: o.verdict,
            data: o.data.clone(),
            budget: budget.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        };
        writeln!(out, "{}", serde_json::to_string(&env).expect("envelopes serialize"))?;
        if o.verdict == Verdict::Error {
            write!(err, "{}", o.text)?;
        }
    } else if o.verdict == Verdict::Error {
        write!(err, "{}", o.text)?;
    } else {
        write!(out, "{}", o.text)?;
    }
    Ok(())
}

fn dispatch(ctx: &Ctx, cmd: &Command, inputs: &[String]) -> Result<Outcome> {
    let need = |n: usize| -> Result<()> {
        if inputs.len() == n {
            Ok(())
        } else {
            Err(Error::Invalid(format!("{} expects {n} formula(s), got {}", cmd.name(), inputs.len())))
        }
    };
    let one = |n: usize| need(n).map(|_| inputs[0].as_str());
    let result = match cmd {
        Command::Parse { .. } => one(1).and_then(|f| commands::parse_cmd(ctx, f)),
        Command::Eval { at, domain, .. } => one(1).and_then(|f| commands::eval_cmd(ctx, f, at, domain.as_deref())),
        Command::IsoCheck { .. } => need(2).and_then(|_| commands::check_cmd(ctx, &inputs[0], &inputs[1])),
        Command::IsoProve { .. } => need(2).and_then(|_| commands::prove_cmd(ctx, &inputs[0], &inputs[1])),
        Command::IsoDisprove { .. } => need(2).and_then(|_| commands::disprove_cmd(ctx, &inputs[0], &inputs[1])),
        Command::Enf { .. } => one(1).and_then(|f| commands::enf_cmd(ctx, f)),
        Command::Level { .. } => one(1).and_then(|f| commands::level_cmd(ctx, f)),
        Command::Glclass { .. } => one(1).and_then(|f| commands::glclass_cmd(ctx, f)),
        Command::PrenexLevel { .. } => one(1).and_then(|f| commands::prenex_cmd(ctx, f)),
        Command::WitnessVerify { .. } => match inputs.len() {
            1 => commands::witness_cmd(ctx, &inputs[0], None),
            2 => commands::witness_cmd(ctx, &inputs[0], Some(&inputs[1])),
            n => Err(Error::Invalid(format!("witness-verify expects 1 or 2 formulas, got {n}"))),
        },
        Command::Selftest => need(0).map(|_| selftest(ctx)),
    };
    Ok(result.unwrap_or_else(|e| Outcome::from_error(&e)))
}

fn selftest(ctx: &Ctx) -> Outcome {
    type Check = (&'static str, fn(&Ctx) -> Result<bool>);
    let checks: [Check; 6] = [
        ("a & a and a differ at a=2 (4 vs 2)", |ctx| {
            let o = commands::disprove_cmd(ctx, "a & a", "a")?;
            Ok(o.verdict == Verdict::Disproved && o.data["counterexample"] == json!({"a": 2}))
        }),
        ("(a | b) -> c is derivably (a -> c) & (b -> c)", |ctx| {
            Ok(commands::prove_cmd(ctx, "(a | b) -> c", "(a -> c) & (b -> c)")?.verdict == Verdict::Proved)
        }),
        ("all x. ex y. P(x,y) is at level Π2", |ctx| {
            Ok(commands::level_cmd(ctx, "all x. ex y. P(x,y)")?.text == "Π2\n")
        }),
        ("a -> b -> c is outside the Gurevič–Levitz class", |ctx| {
            Ok(commands::glclass_cmd(ctx, "a -> b -> c")?.data["inClass"] == json!(false))
        }),
        ("Martin pair agrees on {1..4}^4", |_| {
            let l = to_term(&parse(MARTIN_LHS, SyntaxFlavor::Logical)?);
            let r = to_term(&parse(MARTIN_RHS, SyntaxFlavor::Logical)?);
            for k in 0..256u64 {
                let mut a = Assignment::new();
                for i in 0..4 {
                    a.set(&format!("x{}", i + 1), (k >> (2 * i) & 3) + 1);
                }
                if eval(&l, &a)? != eval(&r, &a)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
        ("axiom witnesses round-trip at sizes 1,2", |_| {
            let atoms: Subst = [("phi", "a"), ("psi", "b"), ("xi", "c")]
                .into_iter()
                .map(|(k, v)| Ok((k.to_string(), parse_term(v)?)))
                .collect::<Result<_>>()?;
            let quant: Subst = [("x", "x"), ("phi", "P(x)"), ("psi", "b")]
                .into_iter()
                .map(|(k, v)| Ok((k.to_string(), parse_term(v)?)))
                .collect::<Result<_>>()?;
            for ax in AxiomId::ALL {
                for dir in [Direction::LR, Direction::RL] {
                    let s = if ax.is_quantifier() { &quant } else { &atoms };
                    let w = axiom_witness(ax, dir, s)?;
                    for m in probe_models(&[&w.source, &w.target], &[1, 2]) {
                        if !verify_roundtrip(&w, &m)?.ok {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }),
    ];
    let mut text = String::new();
    let mut results = Vec::new();
    for (name, check) in checks {
        let pass = check(ctx).unwrap_or(false);
        text.push_str(&format!("{} {name}\n", if pass { "PASS" } else { "FAIL" }));
        results.push(json!({ "check": name, "pass": pass }));
    }
    let all = results.iter().all(|r| r["pass"] == json!(true));
    Outcome {
        verdict: if all { Verdict::Ok } else { Verdict::Error },
        data: Value::Array(results),
        text,
    }
}
