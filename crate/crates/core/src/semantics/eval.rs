use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::syntax::Term;

/// Results larger than this many bits are refused rather than computed.
pub const MAX_BITS: u64 = 1 << 20;

/// Positive values for atoms and sizes for quantifier domains.
///
/// Atom values are looked up by instance key first (`P(0,1)`, with bound
/// arguments replaced by their domain element) and then by bare name (`P`),
/// so a single value is shared across tuples unless a table entry overrides it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub values: BTreeMap<String, BigUint>,
    pub domains: BTreeMap<String, u32>,
    pub default_domain: Option<u32>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: u64) -> Self {
        self.set(name, value);
        self
    }

    pub fn with_domain(mut self, size: u32) -> Self {
        self.default_domain = Some(size);
        self
    }

    pub fn set(&mut self, name: &str, value: u64) {
        assert!(value >= 1, "assignments range over positive naturals");
        self.values.insert(name.to_string(), BigUint::from(value));
    }

    pub fn domain_of(&self, var: &str) -> Result<u32> {
        self.domains
            .get(var)
            .copied()
            .or(self.default_domain)
            .ok_or_else(|| Error::Unassigned(format!("domain of {var}")))
    }

    pub(crate) fn lookup(&self, name: &str, args: &[String], env: &[(String, u32)]) -> Result<&BigUint> {
        if !args.is_empty() {
            let key = instance_key(name, args, env);
            if let Some(v) = self.values.get(&key) {
                return Ok(v);
            }
        }
        self.values
            .get(name)
            .ok_or_else(|| Error::Unassigned(name.to_string()))
    }

    /// Parses `a=2,b=3` (also `P(0)=2`). Values must be positive.
    pub fn parse_values(&mut self, text: &str) -> Result<()> {
        for (key, value) in split_pairs(text)? {
            let v: BigUint = value
                .parse()
                .map_err(|_| Error::Invalid(format!("`{value}` is not a natural number")))?;
            if v < BigUint::one() {
                return Err(Error::Invalid(format!("`{key}` must be at least 1")));
            }
            self.values.insert(key, v);
        }
        Ok(())
    }

    /// Parses `x=2,y=3`; a bare number sets the default domain size.
    pub fn parse_domains(&mut self, text: &str) -> Result<()> {
        let text = text.trim();
        if let Ok(n) = text.parse::<u32>() {
            if n == 0 {
                return Err(Error::Invalid("domain sizes must be at least 1".into()));
            }
            self.default_domain = Some(n);
            return Ok(());
        }
        for (key, value) in split_pairs(text)? {
            let n: u32 = value
                .parse()
                .ok()
                .filter(|n| *n >= 1)
                .ok_or_else(|| Error::Invalid(format!("bad domain size `{value}`")))?;
            self.domains.insert(key, n);
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in &self.values {
            m.insert(k.clone(), big_json(v));
        }
        if self.default_domain.is_some() || !self.domains.is_empty() {
            let mut d = Map::new();
            if let Some(n) = self.default_domain {
                d.insert("*".into(), json!(n));
            }
            for (k, n) in &self.domains {
                d.insert(k.clone(), json!(n));
            }
            m.insert("domain".into(), Value::Object(d));
        }
        Value::Object(m)
    }
}

pub(crate) fn big_json(v: &BigUint) -> Value {
    match v.to_u64() {
        Some(n) => json!(n),
        None => json!(v.to_string()),
    }
}

fn split_pairs(text: &str) -> Result<Vec<(String, String)>> {
    // Commas inside parentheses belong to instance keys such as `R(0,1)`.
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut items = Vec::new();
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                items.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    items.push(cur);
    for item in items.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("expected name=value, got `{item}`")))?;
        let k: String = k.chars().filter(|c| !c.is_whitespace()).collect();
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if let Some(n) = self.default_domain {
            parts.push(format!("domain={n}"));
        }
        parts.extend(self.domains.iter().map(|(k, n)| format!("domain({k})={n}")));
        write!(f, "{}", parts.join(","))
    }
}

pub(crate) fn instance_key(name: &str, args: &[String], env: &[(String, u32)]) -> String {
    let shown: Vec<String> = args
        .iter()
        .map(|a| match env.iter().rev().find(|(v, _)| v == a) {
            Some((_, d)) => d.to_string(),
            None => a.clone(),
        })
        .collect();
    format!("{name}({})", shown.join(","))
}

/// Exact value of `t` over positive naturals; binders range over their domains.
pub fn eval(t: &Term, a: &Assignment) -> Result<BigUint> {
    eval_in(t, a, &mut Vec::new())
}

fn eval_in(t: &Term, a: &Assignment, env: &mut Vec<(String, u32)>) -> Result<BigUint> {
    Ok(match t {
        Term::Var { name, args } => a.lookup(name, args, env)?.clone(),
        Term::One => BigUint::one(),
        Term::Sum(x, y) => eval_in(x, a, env)? + eval_in(y, a, env)?,
        Term::Prod(x, y) => eval_in(x, a, env)? * eval_in(y, a, env)?,
        Term::Pow(x, y) => {
            let base = eval_in(x, a, env)?;
            match eval_in(y, a, env) {
                // 1^e = 1 even when e itself is too large to compute
                Err(Error::Overflow(_)) if base.is_one() => base,
                exp => checked_pow(&base, &exp?)?,
            }
        }
        Term::QSum(x, body) | Term::QProd(x, body) => {
            let size = a.domain_of(x)?;
            let is_sum = matches!(t, Term::QSum(..));
            let mut acc = if is_sum { BigUint::ZERO } else { BigUint::one() };
            for d in 0..size {
                env.push((x.clone(), d));
                let v = eval_in(body, a, env);
                env.pop();
                if is_sum {
                    acc += v?;
                } else {
                    acc *= v?;
                }
            }
            acc
        }
    })
}

pub(crate) fn checked_pow(base: &BigUint, exp: &BigUint) -> Result<BigUint> {
    if base.is_one() {
        return Ok(BigUint::one());
    }
    let e = exp
        .to_u64()
        .filter(|e| base.bits().saturating_mul(*e) <= MAX_BITS)
        .ok_or_else(|| Error::Overflow(format!("{base}^{exp}")))?;
    // e <= MAX_BITS, so it fits in u32
    Ok(base.pow(e as u32))
}
