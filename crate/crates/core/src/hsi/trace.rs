use serde_json::{json, Map, Value};

use super::axiom::{rewrite_at, AxiomId, Direction, RewriteStep, Subst};
use super::normal::normal_form_capped;
use crate::error::{Error, Result};
use crate::syntax::{parse_term, print_term, Path, Term};

/// A derivation: `steps` applied in order take `start` to `end`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteTrace {
    pub start: Term,
    pub steps: Vec<RewriteStep>,
    pub end: Term,
}

impl RewriteTrace {
    pub fn empty(t: Term) -> Self {
        RewriteTrace {
            start: t.clone(),
            steps: Vec::new(),
            end: t,
        }
    }

    /// The same derivation read backwards.
    pub fn reversed(&self) -> Self {
        RewriteTrace {
            start: self.end.clone(),
            steps: self.steps.iter().rev().map(RewriteStep::reversed).collect(),
            end: self.start.clone(),
        }
    }

    pub fn steps_json(&self) -> Value {
        Value::Array(self.steps.iter().map(step_to_json).collect())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "start": print_term(&self.start),
            "steps": self.steps_json(),
            "end": print_term(&self.end),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let term = |key: &str| -> Result<Term> {
            let s = v
                .get(key)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Invalid(format!("trace is missing `{key}`")))?;
            parse_term(s)
        };
        let steps = v
            .get("steps")
            .ok_or_else(|| Error::Invalid("trace is missing `steps`".into()))?;
        Ok(RewriteTrace {
            start: term("start")?,
            steps: steps_from_json(steps)?,
            end: term("end")?,
        })
    }
}

pub fn step_to_json(s: &RewriteStep) -> Value {
    let subst: Map<String, Value> = s
        .subst
        .iter()
        .map(|(k, t)| (k.clone(), Value::String(print_term(t))))
        .collect();
    json!({
        "axiom": s.axiom,
        "path": s.path,
        "dir": s.dir,
        "subst": subst,
    })
}

pub fn steps_from_json(v: &Value) -> Result<Vec<RewriteStep>> {
    let bad = |what: &str| Error::Invalid(format!("malformed step: {what}"));
    let items = v.as_array().ok_or_else(|| bad("expected an array"))?;
    items
        .iter()
        .map(|item| {
            let axiom: AxiomId = serde_json::from_value(item.get("axiom").cloned().unwrap_or(Value::Null))
                .map_err(|_| bad("unknown axiom"))?;
            let dir: Direction = serde_json::from_value(item.get("dir").cloned().unwrap_or(Value::Null))
                .map_err(|_| bad("direction must be LR or RL"))?;
            let path: Path = serde_json::from_value(item.get("path").cloned().unwrap_or(Value::Null))
                .map_err(|_| bad("path must be an integer array"))?;
            let mut subst = Subst::new();
            if let Some(m) = item.get("subst") {
                let m = m.as_object().ok_or_else(|| bad("subst must be an object"))?;
                for (k, t) in m {
                    let text = t.as_str().ok_or_else(|| bad("subst values are term strings"))?;
                    subst.insert(k.clone(), parse_term(text)?);
                }
            }
            Ok(RewriteStep { axiom, path, dir, subst })
        })
        .collect()
}

/// Replays the steps from `trace.start`; the result must agree with
/// `trace.end` up to bound names.
pub fn replay(trace: &RewriteTrace) -> Result<Term> {
    let mut t = trace.start.clone();
    for (index, step) in trace.steps.iter().enumerate() {
        rewrite_at(&mut t, step).map_err(|e| Error::StepMismatch {
            index,
            reason: e.to_string(),
        })?;
    }
    if !t.alpha_eq(&trace.end) {
        return Err(Error::StepMismatch {
            index: trace.steps.len(),
            reason: format!("ends at `{}`, expected `{}`", print_term(&t), print_term(&trace.end)),
        });
    }
    Ok(t)
}

/// A derivation of `t1 = t2` when both have the same normal form. `None`
/// does not mean the terms differ.
pub fn prove_equal(t1: &Term, t2: &Term) -> Result<Option<RewriteTrace>> {
    prove_equal_capped(t1, t2, super::normal::DEFAULT_NODE_CAP)
}

pub fn prove_equal_capped(t1: &Term, t2: &Term, cap: usize) -> Result<Option<RewriteTrace>> {
    let (n1, tr1) = normal_form_capped(t1, cap)?;
    let (n2, tr2) = normal_form_capped(t2, cap)?;
    if n1 != n2 {
        return Ok(None);
    }
    let back = tr2.reversed();
    let mut steps = tr1.steps;
    steps.extend(back.steps);
    Ok(Some(RewriteTrace {
        start: tr1.start,
        steps,
        end: back.end,
    }))
}
