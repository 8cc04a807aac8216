//! Recursive-descent parser for Laurent polynomial expressions.
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := atom ('^' exponent)?
//! exponent := ['-'] integer | '(' ['-'] integer ')'
//! atom     := integer | variable | '(' expr ')'
//! variable := 'x' | 'y' | 'z' | 'x' digits
//! ```
//!
//! Division and negative powers are only allowed for monomials.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use super::LaurentPolynomial;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

fn lex(text: &str, dim: usize) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            b'x' | b'y' | b'z' => {
                i += 1;
                let idx = if c == b'x' && i < bytes.len() && bytes[i].is_ascii_digit() {
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let k: usize = match text[start + 1..i].parse() {
                        Ok(k) if k >= 1 => k,
                        _ => return err(start, format!("bad variable '{}'", &text[start..i])),
                    };
                    k - 1
                } else {
                    (c - b'x') as usize
                };
                if idx >= dim {
                    return err(
                        start,
                        format!("variable '{}' out of range for dimension {dim}", &text[start..i]),
                    );
                }
                out.push((start, Tok::Var(idx)));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return err(start, format!("unexpected character '{ch}'"));
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let negate = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                true
            }
            Some(Tok::Plus) => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t).expect("same dimension");
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t).expect("same dimension");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = acc.mul(&f).expect("same dimension");
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let at = self.offset();
                    let f = self.factor()?;
                    let inv = monomial_inverse(&f)
                        .ok_or_else(|| ParseError {
                            position: at,
                            message: "division is only allowed by a nonzero monomial".into(),
                        })?;
                    acc = acc.mul(&inv).expect("same dimension");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exp = self.exponent()?;
        let n = exp
            .abs()
            .to_u32()
            .ok_or_else(|| ParseError {
                position: at,
                message: "exponent too large".into(),
            })?;
        if exp.is_negative() {
            let inv = monomial_inverse(&base).ok_or_else(|| ParseError {
                position: at,
                message: "negative exponent requires a nonzero monomial base".into(),
            })?;
            Ok(inv.pow(n))
        } else {
            Ok(base.pow(n))
        }
    }

    fn exponent(&mut self) -> Result<BigInt, ParseError> {
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.bump();
        }
        let neg = self.peek() == Some(&Tok::Minus);
        if neg {
            self.bump();
        }
        let at = self.offset();
        let n = match self.bump() {
            Some(Tok::Int(n)) => n,
            _ => return err(at, "expected integer exponent"),
        };
        if paren {
            let at = self.offset();
            if self.bump() != Some(Tok::RParen) {
                return err(at, "expected ')'");
            }
        }
        Ok(if neg { -n } else { n })
    }

    fn atom(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(LaurentPolynomial::constant(
                self.dim,
                Rational::from_integer(n),
            )),
            Some(Tok::Var(i)) => Ok(LaurentPolynomial::variable(self.dim, i)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let at = self.offset();
                if self.bump() != Some(Tok::RParen) {
                    return err(at, "expected ')'");
                }
                Ok(e)
            }
            Some(_) => err(at, "expected a number, variable or '('"),
            None => err(at, "unexpected end of input"),
        }
    }
}

fn monomial_inverse(p: &LaurentPolynomial) -> Option<LaurentPolynomial> {
    let (e, c) = p.as_monomial()?;
    Some(LaurentPolynomial::monomial(-e, c.recip()))
}

/// Parses `text` as a Laurent polynomial in `dimension` variables. Variables
/// are `x, y, z` (for dimension at most 3) or `x1 .. xd`.
pub fn parse(text: &str, dimension: usize) -> Result<LaurentPolynomial, ParseError> {
    let toks = lex(text, dimension)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        dim: dimension,
    };
    if p.toks.is_empty() {
        return err(0, "empty expression");
    }
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        return err(p.offset(), "unexpected trailing input");
    }
    Ok(out)
}
