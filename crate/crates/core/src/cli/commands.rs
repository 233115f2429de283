use std::fmt::Write as _;
use std::path::Path as FsPath;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::explog::{check_pi_sigma, compare_levels, enf_capped, gl_member, level, level_of_normal, prenex_level, replay_iso, PiSigma};
use crate::hsi::{normal_form_capped, prove_equal_capped, replay, step_to_json, RewriteStep, RewriteTrace};
use crate::semantics::{big_json, eval, search_counterexample, Assignment, SearchBudget, Verdict as Search};
use crate::syntax::{parse, print, print_term, rename_apart_term, to_term, Formula, SyntaxFlavor};
use crate::witness::{compose_term_trace, compose_trace, probe_models, verify_roundtrip, WitnessPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Ok,
    Proved,
    Disproved,
    Inconclusive,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Ok | Verdict::Proved => 0,
            Verdict::Disproved => 1,
            Verdict::Inconclusive => 2,
            Verdict::Error => 3,
        }
    }
}

/// What one command produced: the verdict, the JSON payload and the text
/// shown without `--json`.
pub struct Outcome {
    pub verdict: Verdict,
    pub data: Value,
    pub text: String,
}

impl Outcome {
    fn new(verdict: Verdict, data: Value, text: impl Into<String>) -> Self {
        Outcome {
            verdict,
            data,
            text: text.into(),
        }
    }

    /// Resource limits make a result inconclusive; anything else is an error.
    pub fn from_error(e: &Error) -> Self {
        let verdict = match e {
            Error::SizeGuard { .. } | Error::TooLarge { .. } | Error::Overflow(_) => Verdict::Inconclusive,
            _ => Verdict::Error,
        };
        Outcome::new(verdict, json!({ "error": e.to_string() }), format!("{}: {e}\n", verdict_word(verdict)))
    }
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Inconclusive => "inconclusive",
        _ => "error",
    }
}

/// Settings shared by all commands.
pub struct Ctx<'a> {
    pub flavor: SyntaxFlavor,
    pub budget: SearchBudget,
    pub cap: usize,
    pub sizes: &'a [u64],
    pub trace: Option<&'a FsPath>,
}

impl Ctx<'_> {
    pub fn parse(&self, text: &str) -> Result<Formula> {
        parse(text, self.flavor)
    }

    /// Prints in the chosen flavor, falling back to logical syntax for
    /// first-order formulas.
    pub fn show(&self, f: &Formula) -> String {
        print(f, self.flavor).unwrap_or_else(|_| logical(f))
    }

    fn write_trace(&self, v: &Value) -> Result<()> {
        if let Some(path) = self.trace {
            let text = serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n";
            std::fs::write(path, text).map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(())
    }
}

fn logical(f: &Formula) -> String {
    print(f, SyntaxFlavor::Logical).expect("logical printing is total")
}

pub fn parse_cmd(ctx: &Ctx, text: &str) -> Result<Outcome> {
    let f = ctx.parse(text)?;
    let algebraic = print(&f, SyntaxFlavor::Algebraic).ok();
    let data = json!({
        "logical": logical(&f),
        "algebraic": algebraic,
        "term": print_term(&to_term(&f)),
        "propositional": f.is_propositional(),
        "size": f.size(),
    });
    let mut text = format!("logical    {}\n", logical(&f));
    match &algebraic {
        Some(a) => writeln!(text, "algebraic  {a}").unwrap(),
        None => writeln!(text, "term       {}", print_term(&to_term(&f))).unwrap(),
    }
    Ok(Outcome::new(Verdict::Ok, data, text))
}

pub fn eval_cmd(ctx: &Ctx, text: &str, at: &str, domain: Option<&str>) -> Result<Outcome> {
    let f = ctx.parse(text)?;
    let mut a = Assignment::new();
    a.parse_values(at)?;
    if let Some(d) = domain {
        a.parse_domains(d)?;
    }
    let v = eval(&to_term(&f), &a)?;
    let data = json!({ "value": big_json(&v), "assignment": a.to_json() });
    Ok(Outcome::new(Verdict::Ok, data, format!("{v}\n")))
}

pub fn disprove_cmd(ctx: &Ctx, lhs: &str, rhs: &str) -> Result<Outcome> {
    let (f, g) = (ctx.parse(lhs)?, ctx.parse(rhs)?);
    Ok(match search_counterexample(&f, &g, &ctx.budget)? {
        Search::Counterexample { assignment, lhs, rhs } => Outcome::new(
            Verdict::Disproved,
            json!({
                "counterexample": assignment.to_json(),
                "lhs": big_json(&lhs),
                "rhs": big_json(&rhs),
            }),
            format!("disproved: at {assignment} the sides are {lhs} and {rhs}\n"),
        ),
        Search::Equal { checked } => Outcome::new(
            Verdict::Inconclusive,
            json!({ "checked": checked, "exhausted": true }),
            format!("inconclusive: the sides agree on all {checked} assignments tried ({})\n", ctx.budget),
        ),
        Search::Inconclusive { checked } => Outcome::new(
            Verdict::Inconclusive,
            json!({ "checked": checked, "exhausted": false }),
            format!("inconclusive: budget {} ran out after {checked} assignments\n", ctx.budget),
        ),
    })
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("1 {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn steps_text(steps: &[RewriteStep], out: &mut String) {
    for (i, s) in steps.iter().enumerate() {
        writeln!(out, "{:>4}  {} {} at {}", i + 1, s.axiom, s.dir, s.path).unwrap();
    }
}

/// A checked derivation between the two sides, if their normal forms agree.
fn derivation(ctx: &Ctx, f: &Formula, g: &Formula) -> Result<std::result::Result<RewriteTrace, (String, String)>> {
    let t1 = rename_apart_term(&to_term(f));
    let t2 = rename_apart_term(&to_term(g));
    match prove_equal_capped(&t1, &t2, ctx.cap)? {
        Some(tr) => {
            // Never print a derivation that does not replay.
            let end = replay(&tr)?;
            if !end.alpha_eq(&t2) {
                return Err(Error::StepMismatch {
                    index: tr.steps.len(),
                    reason: "derivation does not end at the right-hand side".into(),
                });
            }
            Ok(Ok(tr))
        }
        None => {
            let n1 = normal_form_capped(&t1, ctx.cap)?.0.to_term();
            let n2 = normal_form_capped(&t2, ctx.cap)?.0.to_term();
            Ok(Err((print_term(&n1), print_term(&n2))))
        }
    }
}

pub fn prove_cmd(ctx: &Ctx, lhs: &str, rhs: &str) -> Result<Outcome> {
    let (f, g) = (ctx.parse(lhs)?, ctx.parse(rhs)?);
    Ok(match derivation(ctx, &f, &g)? {
        Ok(tr) => {
            ctx.write_trace(&tr.to_json())?;
            let mut text = format!("proved in {}\n", plural(tr.steps.len(), "step"));
            steps_text(&tr.steps, &mut text);
            Outcome::new(Verdict::Proved, json!({ "steps": tr.steps.len(), "trace": tr.to_json() }), text)
        }
        Err((n1, n2)) => Outcome::new(
            Verdict::Inconclusive,
            json!({ "normalForms": [n1, n2] }),
            format!("inconclusive: normal forms differ\n  {n1}\n  {n2}\n"),
        ),
    })
}

pub fn check_cmd(ctx: &Ctx, lhs: &str, rhs: &str) -> Result<Outcome> {
    let d = disprove_cmd(ctx, lhs, rhs)?;
    if d.verdict == Verdict::Disproved {
        return Ok(Outcome::new(d.verdict, json!({ "disprove": d.data }), d.text));
    }
    let p = prove_cmd(ctx, lhs, rhs)?;
    let text = if p.verdict == Verdict::Proved {
        p.text
    } else {
        format!("{}{}", d.text, p.text)
    };
    Ok(Outcome::new(p.verdict, json!({ "disprove": d.data, "prove": p.data }), text))
}

fn class_name(f: &Formula) -> &'static str {
    match check_pi_sigma(f) {
        PiSigma::InSigma => "Sigma",
        PiSigma::InPi => "Pi",
        PiSigma::Neither(_) => "Neither",
    }
}

pub fn enf_cmd(ctx: &Ctx, text: &str) -> Result<Outcome> {
    let f = ctx.parse(text)?;
    let r = enf_capped(&f, ctx.cap)?;
    let replayed = replay_iso(&r.start, &r.iso_trace)?;
    if !replayed.alpha_eq(&r.normal) {
        return Err(Error::StepMismatch {
            index: r.iso_trace.len(),
            reason: "normal form does not replay".into(),
        });
    }
    ctx.write_trace(&json!({
        "start": logical(&r.start),
        "steps": Value::Array(r.iso_trace.iter().map(step_to_json).collect()),
        "end": logical(&r.normal),
    }))?;
    let lvl = level_of_normal(&r.normal);
    let data = json!({
        "normal": ctx.show(&r.normal),
        "class": class_name(&r.normal),
        "level": lvl,
        "steps": r.iso_trace.len(),
    });
    let lvl_text = lvl.map_or_else(|| "-".to_string(), |l| l.to_string());
    let text = format!("{}\n  {lvl_text}, {}\n", ctx.show(&r.normal), plural(r.iso_trace.len(), "step"));
    Ok(Outcome::new(Verdict::Ok, data, text))
}

pub fn level_cmd(ctx: &Ctx, text: &str) -> Result<Outcome> {
    let l = level(&ctx.parse(text)?)?;
    Ok(Outcome::new(Verdict::Ok, json!(l), format!("{l}\n")))
}

pub fn glclass_cmd(ctx: &Ctx, text: &str) -> Result<Outcome> {
    let f = ctx.parse(text)?;
    let m = gl_member(&f)?;
    let text = match &m.witness_path {
        None => "in class\n".to_string(),
        Some(p) => {
            let sub = f.at(p).map(logical).unwrap_or_default();
            format!("not in class: violation at {p}: {sub}\n")
        }
    };
    Ok(Outcome::new(Verdict::Ok, json!(m), text))
}

pub fn prenex_cmd(ctx: &Ctx, text: &str) -> Result<Outcome> {
    let f = ctx.parse(text)?;
    Ok(match compare_levels(&f)? {
        Some(c) => {
            let verdict = if c.consistent { "consistent" } else { "inconsistent" };
            Outcome::new(
                Verdict::Ok,
                json!(c),
                format!("classical {}, intuitionistic {}: {verdict}\n", c.cl_level, c.int_level),
            )
        }
        None => Outcome::new(Verdict::Ok, Value::Null, "not prenex\n"),
    })
}

pub fn witness_cmd(ctx: &Ctx, lhs: &str, rhs: Option<&str>) -> Result<Outcome> {
    let f = ctx.parse(lhs)?;
    let w: WitnessPair = match rhs {
        None => {
            let r = enf_capped(&f, ctx.cap)?;
            compose_trace(&r.start, &r.iso_trace)?
        }
        Some(rhs) => match derivation(ctx, &f, &ctx.parse(rhs)?)? {
            Ok(tr) => compose_term_trace(&tr)?,
            Err((n1, n2)) => {
                return Ok(Outcome::new(
                    Verdict::Inconclusive,
                    json!({ "normalForms": [n1, n2] }),
                    format!("inconclusive: no derivation to build a witness from\n  {n1}\n  {n2}\n"),
                ))
            }
        },
    };
    w.type_check()?;
    let models = probe_models(&[&w.source, &w.target], ctx.sizes);
    let (mut passed, mut skipped, mut checked) = (0, 0, 0);
    let mut failure = None;
    for m in &models {
        match verify_roundtrip(&w, m) {
            Ok(rt) if rt.ok => {
                passed += 1;
                checked += rt.checked;
            }
            Ok(rt) => {
                failure = Some(format!("{}: {}", m.assignment, rt.failure.unwrap_or_default()));
                break;
            }
            Err(Error::TooLarge { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let verdict = if failure.is_some() {
        Verdict::Disproved
    } else if passed == 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Ok
    };
    let mut data = w.to_json();
    data["models"] = json!(models.len());
    data["passed"] = json!(passed);
    data["skipped"] = json!(skipped);
    data["checked"] = json!(checked);
    data["failure"] = json!(failure);
    let mut text = format!(
        "source  {}\ntarget  {}\nfwd     {}\nbwd     {}\n",
        ctx.show(&w.source),
        ctx.show(&w.target),
        w.fwd,
        w.bwd
    );
    match &failure {
        Some(msg) => writeln!(text, "round trip fails at {msg}").unwrap(),
        None => writeln!(
            text,
            "{passed} of {} models pass, {skipped} over the size cap, {checked} elements checked",
            models.len()
        )
        .unwrap(),
    }
    Ok(Outcome::new(verdict, data, text))
}

/// One explog batch record; failures are reported in place.
pub fn explog_record(ctx: &Ctx, text: &str) -> Value {
    let go = || -> Result<Value> {
        let f = ctx.parse(text)?;
        let r = enf_capped(&f, ctx.cap)?;
        let gl = match gl_member(&f) {
            Ok(m) => json!(m.in_class),
            Err(Error::NotPropositional) => Value::Null,
            Err(e) => return Err(e),
        };
        Ok(json!({
            "input": text,
            "enf": ctx.show(&r.normal),
            "class": class_name(&r.normal),
            "level": level_of_normal(&r.normal),
            "glMember": gl,
            "prenex": prenex_level(&f),
        }))
    };
    go().unwrap_or_else(|e| json!({ "input": text, "error": e.to_string() }))
}
