//! Recursive-descent parsers for the logical and algebraic concrete syntaxes.
//!
//! Logical: `T`, `P(x,y)`, `&` binds tighter than `|`, which binds tighter than
//! `->` (right-associative); `all x.` / `ex x.` scope as far right as possible.
//!
//! Algebraic: `1`, identifiers, `+` < `*` < `^` (right-associative). Terms
//! written for traces may also use the binders `sum x.` and `prod x.`.

use std::collections::BTreeSet;

use super::ast::{from_term, Formula, SyntaxFlavor, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    One,
    LParen,
    RParen,
    Comma,
    Dot,
    Amp,
    Bar,
    Arrow,
    Plus,
    Star,
    Caret,
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let bump = |line: &mut usize, column: &mut usize, c: char| {
            if c == '\n' {
                *line += 1;
                *column = 1;
            } else {
                *column += 1;
            }
        };
        if c.is_whitespace() {
            chars.next();
            bump(&mut line, &mut column, c);
            continue;
        }
        let tok = if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_alphanumeric() || d == '_' || d == '\'' {
                    s.push(d);
                    chars.next();
                    bump(&mut line, &mut column, d);
                } else {
                    break;
                }
            }
            out.push(Spanned {
                tok: Tok::Ident(s),
                line: l,
                column: col,
            });
            continue;
        } else {
            chars.next();
            bump(&mut line, &mut column, c);
            match c {
                '1' => {
                    if chars.peek().is_some_and(|d| d.is_ascii_digit()) {
                        return Err(Error::Syntax {
                            line: l,
                            column: col,
                            message: "only the numeral 1 is allowed; write 1+1 for two".into(),
                        });
                    }
                    Tok::One
                }
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '&' => Tok::Amp,
                '|' => Tok::Bar,
                '+' => Tok::Plus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '-' if chars.peek() == Some(&'>') => {
                    chars.next();
                    column += 1;
                    Tok::Arrow
                }
                other => {
                    return Err(Error::Syntax {
                        line: l,
                        column: col,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
        };
        out.push(Spanned {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    scope: Vec<String>,
    declared: &'a BTreeSet<String>,
    check_bound: bool,
    term_binders: bool,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.column)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => self.error("expected identifier"),
        }
    }

    fn args(&mut self) -> Result<Vec<String>> {
        let mut args = Vec::new();
        if *self.peek() != Tok::LParen {
            return Ok(args);
        }
        self.next();
        loop {
            let (line, column) = self.here();
            let a = self.ident()?;
            if self.check_bound && !self.scope.contains(&a) && !self.declared.contains(&a) {
                return Err(Error::Unbound { name: a, line, column });
            }
            args.push(a);
            match self.next() {
                Tok::Comma => continue,
                Tok::RParen => break,
                _ => {
                    self.pos -= 1;
                    return self.error("expected `,` or `)` in argument list");
                }
            }
        }
        Ok(args)
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("unexpected trailing input")
        }
    }

    // ---- logical ----

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut f = self.conj()?;
        while *self.peek() == Tok::Bar {
            self.next();
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.next();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(s) if s == "all" || s == "ex" => {
                self.next();
                let x = self.ident()?;
                self.expect(Tok::Dot, "`.` after bound variable")?;
                self.scope.push(x.clone());
                let body = self.formula()?;
                self.scope.pop();
                Ok(if s == "all" {
                    Formula::forall(&x, body)
                } else {
                    Formula::exists(&x, body)
                })
            }
            Tok::Ident(s) if s == "T" => {
                self.next();
                Ok(Formula::Top)
            }
            Tok::Ident(name) => {
                self.next();
                let args = self.args()?;
                Ok(Formula::Prime { name, args })
            }
            _ => self.error("expected a formula"),
        }
    }

    // ---- algebraic ----

    fn sum(&mut self) -> Result<Term> {
        let mut t = self.prod()?;
        while *self.peek() == Tok::Plus {
            self.next();
            t = Term::sum(t, self.prod()?);
        }
        Ok(t)
    }

    fn prod(&mut self) -> Result<Term> {
        let mut t = self.power()?;
        while *self.peek() == Tok::Star {
            self.next();
            t = Term::prod(t, self.power()?);
        }
        Ok(t)
    }

    fn power(&mut self) -> Result<Term> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.next();
            let exp = self.power()?;
            return Ok(Term::pow(base, exp));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::One => {
                self.next();
                Ok(Term::One)
            }
            Tok::LParen => {
                self.next();
                let t = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::Ident(s) if self.term_binders && (s == "sum" || s == "prod") => {
                self.next();
                let x = self.ident()?;
                self.expect(Tok::Dot, "`.` after bound variable")?;
                self.scope.push(x.clone());
                let body = self.sum()?;
                self.scope.pop();
                Ok(if s == "sum" {
                    Term::qsum(&x, body)
                } else {
                    Term::qprod(&x, body)
                })
            }
            Tok::Ident(name) => {
                self.next();
                let args = self.args()?;
                Ok(Term::Var { name, args })
            }
            _ => self.error("expected a term"),
        }
    }
}

/// Parses a closed formula.
pub fn parse(text: &str, flavor: SyntaxFlavor) -> Result<Formula> {
    parse_with_free(text, flavor, &BTreeSet::new())
}

/// Parses a formula whose prime arguments may also mention the `declared`
/// free individual variables.
pub fn parse_with_free(text: &str, flavor: SyntaxFlavor, declared: &BTreeSet<String>) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        scope: Vec::new(),
        declared,
        check_bound: true,
        term_binders: false,
    };
    let f = match flavor {
        SyntaxFlavor::Logical => p.formula()?,
        SyntaxFlavor::Algebraic => from_term(&p.sum()?),
    };
    p.finish()?;
    Ok(f)
}

/// Parses the term syntax used in trace files: algebraic syntax plus the
/// `sum x.` / `prod x.` binders. Free individual variables are allowed.
pub fn parse_term(text: &str) -> Result<Term> {
    let declared = BTreeSet::new();
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        scope: Vec::new(),
        declared: &declared,
        check_bound: false,
        term_binders: true,
    };
    let t = p.sum()?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Formula {
        Formula::atom(s)
    }

    #[test]
    fn implication_is_loosest() {
        let f = parse("a -> b | c", SyntaxFlavor::Logical).unwrap();
        assert_eq!(f, Formula::implies(a("a"), Formula::or(a("b"), a("c"))));
    }

    #[test]
    fn implication_right_assoc() {
        let f = parse("a -> b -> c", SyntaxFlavor::Logical).unwrap();
        assert_eq!(f, Formula::implies(a("a"), Formula::implies(a("b"), a("c"))));
    }

    #[test]
    fn quantifier_scopes_right() {
        let f = parse("all x. P(x) -> Q", SyntaxFlavor::Logical).unwrap();
        assert_eq!(
            f,
            Formula::forall("x", Formula::implies(Formula::pred("P", &["x"]), a("Q")))
        );
    }

    #[test]
    fn algebraic_power() {
        let f = parse("c ^ (a + b)", SyntaxFlavor::Algebraic).unwrap();
        assert_eq!(f, Formula::implies(Formula::or(a("a"), a("b")), a("c")));
        let t = parse_term("c ^ (a + b)").unwrap();
        assert_eq!(t, Term::pow(Term::var("c"), Term::sum(Term::var("a"), Term::var("b"))));
    }

    #[test]
    fn power_right_assoc_and_tightest() {
        let t = parse_term("a * b ^ c ^ d + 1").unwrap();
        let want = Term::sum(
            Term::prod(
                Term::var("a"),
                Term::pow(Term::var("b"), Term::pow(Term::var("c"), Term::var("d"))),
            ),
            Term::One,
        );
        assert_eq!(t, want);
    }

    #[test]
    fn top_and_unicode() {
        let f = parse("T & χ1", SyntaxFlavor::Logical).unwrap();
        assert_eq!(f, Formula::and(Formula::Top, a("χ1")));
    }

    #[test]
    fn unbound_argument_rejected() {
        match parse("P(x)", SyntaxFlavor::Logical) {
            Err(Error::Unbound { name, line, column }) => {
                assert_eq!((name.as_str(), line, column), ("x", 1, 3));
            }
            other => panic!("expected unbound error, got {other:?}"),
        }
        let decl: BTreeSet<String> = ["x".to_string()].into();
        assert!(parse_with_free("P(x)", SyntaxFlavor::Logical, &decl).is_ok());
    }

    #[test]
    fn syntax_error_position() {
        match parse("a &\n  | b", SyntaxFlavor::Logical) {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(parse_term("2 + a"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_term("11"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("a b", SyntaxFlavor::Logical), Err(Error::Syntax { .. })));
    }

    #[test]
    fn term_binders() {
        let t = parse_term("sum x. P(x) * Q").unwrap();
        assert_eq!(
            t,
            Term::qsum(
                "x",
                Term::prod(
                    Term::Var {
                        name: "P".into(),
                        args: vec!["x".into()]
                    },
                    Term::var("Q")
                )
            )
        );
    }
}
