//! Recursive-descent parser for the text syntax
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/")? unary)*       juxtaposition multiplies
//! unary   := ("+" | "-") unary | power
//! power   := primary ("^" integer)?
//! primary := integer | variable | "(" expr ")"
//! ```

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{FieldDescriptor, RationalFunction};
use crate::error::{Error, Result};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u64 = 1000;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl Lexer<'_> {
    fn next(&mut self) -> Result<Option<(usize, Tok)>> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(self.pos) else { return Ok(None) };
        if c.is_ascii_digit() {
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if bytes.get(self.pos) == Some(&b'.') {
                let mut end = self.pos + 1;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                return Err(Error::CoefficientNotInField(self.src[start..end].into()));
            }
            let n = self.src[start..self.pos].parse::<BigInt>().unwrap();
            return Ok(Some((start, Tok::Int(n))));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                self.pos += 1;
            }
            return Ok(Some((start, Tok::Ident(self.src[start..self.pos].into()))));
        }
        if b"+-*/^()".contains(&c) {
            self.pos += 1;
            return Ok(Some((start, Tok::Sym(c as char))));
        }
        let ch = self.src[start..].chars().next().unwrap();
        Err(Error::Syntax { position: start, message: format!("unexpected character `{ch}`") })
    }
}

/// Parsed value; `literal` keeps the exact integer for constant
/// subexpressions so that `1/3` over `F_3` is reported as a coefficient
/// outside the field rather than as a division by the zero polynomial.
struct Val {
    f: RationalFunction,
    literal: Option<BigRational>,
}

struct Parser<'a> {
    lex: Lexer<'a>,
    peeked: Option<(usize, Tok)>,
    desc: &'a Arc<FieldDescriptor>,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<Option<&Tok>> {
        if self.peeked.is_none() {
            self.peeked = self.lex.next()?;
        }
        Ok(self.peeked.as_ref().map(|t| &t.1))
    }
    fn bump(&mut self) -> Result<Option<(usize, Tok)>> {
        if self.peeked.is_none() {
            self.peeked = self.lex.next()?;
        }
        Ok(self.peeked.take())
    }
    fn here(&self) -> usize {
        self.peeked.as_ref().map_or(self.lex.pos, |t| t.0)
    }
    fn err<T>(&self, message: &str) -> Result<T> {
        Err(Error::Syntax { position: self.here(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Val> {
        let mut acc = self.term()?;
        loop {
            match self.peek()? {
                Some(Tok::Sym('+')) => {
                    self.bump()?;
                    let t = self.term()?;
                    acc = Val { f: acc.f.add(&t.f), literal: lit2(&acc, &t, |a, b| a + b) };
                }
                Some(Tok::Sym('-')) => {
                    self.bump()?;
                    let t = self.term()?;
                    acc = Val { f: acc.f.sub(&t.f), literal: lit2(&acc, &t, |a, b| a - b) };
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Val> {
        let mut acc = self.unary()?;
        loop {
            match self.peek()? {
                Some(Tok::Sym('*')) => {
                    self.bump()?;
                    let t = self.unary()?;
                    acc = Val { f: acc.f.mul(&t.f), literal: lit2(&acc, &t, |a, b| a * b) };
                }
                Some(Tok::Sym('/')) => {
                    self.bump()?;
                    let t = self.unary()?;
                    if t.f.is_zero() {
                        return Err(match &t.literal {
                            Some(l) if !l.is_zero() => Error::CoefficientNotInField(format!("1/{l}")),
                            _ => Error::DivisionByZero,
                        });
                    }
                    let literal = match (&acc.literal, &t.literal) {
                        (Some(a), Some(b)) => Some(a / b),
                        _ => None,
                    };
                    acc = Val { f: acc.f.div(&t.f)?, literal };
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::Sym('(')) => {
                    let t = self.power()?;
                    acc = Val { f: acc.f.mul(&t.f), literal: lit2(&acc, &t, |a, b| a * b) };
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Val> {
        match self.peek()? {
            Some(Tok::Sym('-')) => {
                self.bump()?;
                let v = self.unary()?;
                Ok(Val { f: v.f.neg(), literal: v.literal.map(|l| -l) })
            }
            Some(Tok::Sym('+')) => {
                self.bump()?;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Val> {
        let base = self.primary()?;
        if self.peek()? != Some(&Tok::Sym('^')) {
            return Ok(base);
        }
        self.bump()?;
        let pos = self.here();
        let e = match self.bump()? {
            Some((_, Tok::Int(n))) => n,
            _ => return Err(Error::Syntax { position: pos, message: "expected a nonnegative integer exponent".into() }),
        };
        let e = e.to_u64().filter(|&e| e <= MAX_EXPONENT).ok_or(Error::ExponentTooLarge(e.to_u64().unwrap_or(u64::MAX)))?;
        if self.peek()? == Some(&Tok::Sym('^')) {
            return self.err("chained exponents need parentheses");
        }
        let literal = base.literal.as_ref().map(|l| num_traits::pow(l.clone(), e as usize));
        Ok(Val { f: base.f.pow(e as i64)?, literal })
    }

    fn primary(&mut self) -> Result<Val> {
        let pos = self.here();
        match self.bump()? {
            Some((_, Tok::Int(n))) => {
                let q = BigRational::from_integer(n);
                Ok(Val { f: RationalFunction::constant(self.desc, &q)?, literal: Some(q) })
            }
            Some((_, Tok::Ident(name))) => match self.desc.var_index(&name) {
                Some(i) => Ok(Val { f: RationalFunction::var(self.desc, i), literal: None }),
                None => Err(Error::UnknownVariable(name)),
            },
            Some((_, Tok::Sym('('))) => {
                let v = self.expr()?;
                match self.bump()? {
                    Some((_, Tok::Sym(')'))) => Ok(v),
                    _ => Err(Error::Syntax { position: pos, message: "unclosed parenthesis".into() }),
                }
            }
            Some((p, t)) => Err(Error::Syntax { position: p, message: format!("unexpected {}", describe(&t)) }),
            None => Err(Error::Syntax { position: pos, message: "unexpected end of input".into() }),
        }
    }
}

fn lit2(a: &Val, b: &Val, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Option<BigRational> {
    Some(f(a.literal.as_ref()?, b.literal.as_ref()?))
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number {n}"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
    }
}

impl RationalFunction {
    pub fn parse(text: &str, desc: &Arc<FieldDescriptor>) -> Result<Self> {
        let mut p = Parser { lex: Lexer { src: text, pos: 0 }, peeked: None, desc };
        if p.peek()?.is_none() {
            return p.err("empty expression");
        }
        let v = p.expr()?;
        match p.bump()? {
            None => Ok(v.f),
            Some((pos, t)) => Err(Error::Syntax { position: pos, message: format!("unexpected {}", describe(&t)) }),
        }
    }
}
