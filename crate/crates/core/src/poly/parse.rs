//! Text grammar for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```
//!
//! Implicit multiplication (`2x`, `x y`) is rejected.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    /// 1-based column of the offending character.
    pub column: usize,
    pub message: String,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownVariable,
    ExponentRange,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

fn lex(src: &str) -> Result<Lexer, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Int(s.parse().unwrap()), start + 1));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), start + 1));
        } else if "+-*^()/".contains(c) {
            toks.push((Tok::Sym(c), i + 1));
            i += 1;
        } else {
            return Err(syntax(i + 1, format!("unexpected character '{c}'")));
        }
    }
    Ok(Lexer { toks, pos: 0, end: chars.len() + 1 })
}

fn syntax(column: usize, message: String) -> ParseError {
    ParseError { column, message, kind: ParseErrorKind::Syntax }
}

struct Parser<'a> {
    lx: Lexer,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.lx.toks.get(self.lx.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.lx.toks.get(self.lx.pos).map(|(_, c)| *c).unwrap_or(self.lx.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.lx.pos += 1;
            true
        } else {
            false
        }
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = acc * self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.lx.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| ParseError {
                        column: col,
                        message: "exponent exceeds machine range".into(),
                        kind: ParseErrorKind::ExponentRange,
                    })?;
                    return Ok(base.pow(e));
                }
                _ => return Err(syntax(col, "expected a non-negative integer exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let col = self.col();
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Int(n)) => {
                self.lx.pos += 1;
                let mut value = Rational::from_integer(n);
                if self.eat('/') {
                    let dcol = self.col();
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            self.lx.pos += 1;
                            value /= Rational::from_integer(d);
                        }
                        _ => return Err(syntax(dcol, "expected a nonzero integer denominator".into())),
                    }
                }
                self.reject_juxtaposition()?;
                Ok(Polynomial::constant(self.nvars(), value))
            }
            Some(Tok::Ident(name)) => {
                self.lx.pos += 1;
                let v = self.names.iter().position(|n| *n == name).ok_or_else(|| ParseError {
                    column: col,
                    message: format!("unknown variable '{name}'"),
                    kind: ParseErrorKind::UnknownVariable,
                })?;
                self.reject_juxtaposition()?;
                Ok(Polynomial::var(self.nvars(), v))
            }
            Some(Tok::Sym('(')) => {
                self.lx.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(syntax(self.col(), "expected ')'".into()));
                }
                self.reject_juxtaposition()?;
                Ok(inner)
            }
            Some(Tok::Sym(c)) => Err(syntax(col, format!("unexpected '{c}'"))),
            None => Err(syntax(col, "unexpected end of input".into())),
        }
    }

    fn reject_juxtaposition(&self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('(')) => Err(syntax(
                self.col(),
                "implicit multiplication is not allowed; use '*'".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Parses `src` as a polynomial in the variables `names` (in that positional order).
pub fn parse_polynomial(src: &str, names: &[impl AsRef<str>]) -> Result<Polynomial, ParseError> {
    let lx = lex(src)?;
    let names: Vec<&str> = names.iter().map(AsRef::as_ref).collect();
    let mut p = Parser { lx, names: &names };
    let out = p.expr()?;
    if p.lx.pos != p.lx.toks.len() {
        return Err(syntax(p.col(), "trailing input".into()));
    }
    Ok(out)
}
