//! Recursive-descent parser for operator expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' natural)?
//! base   := 'delta' | 'z' | 'i' | number | identifier | '(' expr ')'
//! number := digits ('.' digits)? 'i'?
//! ```
//!
//! Products are noncommutative. `A / f` means `A·f⁻¹` and requires `f` to be
//! free of `delta`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::operator::DiffOperator;
use super::rational::RationalFunc;
use crate::error::{Error, Result};
use crate::field::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational, bool),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn syntax<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Syntax {
        pos,
        msg: msg.into(),
    })
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() || c == '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let lit = &text[start..i];
                let value = parse_decimal(lit).ok_or(Error::Syntax {
                    pos: start,
                    msg: format!("malformed number `{lit}`"),
                })?;
                // an `i` directly after the digits, not followed by more identifier characters
                let imag = i < bytes.len()
                    && bytes[i] == b'i'
                    && !bytes
                        .get(i + 1)
                        .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
                if imag {
                    i += 1;
                }
                out.push((Tok::Num(value, imag), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            other => return syntax(start, format!("unexpected character `{other}`")),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn parse_decimal(lit: &str) -> Option<BigRational> {
    let (int, frac) = match lit.split_once('.') {
        Some((a, b)) => (a, b),
        None => (lit, ""),
    };
    if int.is_empty() && frac.is_empty() || frac.contains('.') {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().ok()?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(n, d))
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    bindings: &'a HashMap<String, Scalar>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<DiffOperator> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DiffOperator> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    let rhs = self.factor()?;
                    let Some(f) = rhs.as_coeff() else {
                        return syntax(pos, "divisor must not contain delta");
                    };
                    acc = acc.mul(&DiffOperator::from_coeff(f.inv()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<DiffOperator> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let base = self.base()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Tok::Num(n, false) if n.is_integer() => {
                    let k: u32 = n
                        .to_integer()
                        .try_into()
                        .map_err(|_| Error::Syntax {
                            pos,
                            msg: "exponent too large".into(),
                        })?;
                    return Ok(base.pow(k));
                }
                Tok::End => return syntax(pos, "unexpected end of input, expected exponent"),
                _ => return syntax(pos, "exponent must be a natural number"),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<DiffOperator> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(v, imag) => {
                let s = if imag {
                    Scalar::new(BigRational::zero(), v)
                } else {
                    Scalar::real(v)
                };
                Ok(DiffOperator::constant(s))
            }
            Tok::Ident(name) => match name.as_str() {
                "delta" => Ok(DiffOperator::delta()),
                "z" => Ok(DiffOperator::z()),
                "i" => Ok(DiffOperator::constant(Scalar::new(
                    BigRational::zero(),
                    BigRational::one(),
                ))),
                _ => match self.bindings.get(&name) {
                    Some(s) => Ok(DiffOperator::constant(s.clone())),
                    None => Err(Error::UnboundParameter(name)),
                },
            },
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.pos();
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    Tok::End => syntax(close, "unexpected end of input, expected `)`"),
                    _ => syntax(close, "expected `)`"),
                }
            }
            Tok::End => syntax(pos, "unexpected end of input"),
            t => syntax(pos, format!("unexpected token {}", describe(&t))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Plus => "`+`",
        Tok::Minus => "`-`",
        Tok::Star => "`*`",
        Tok::Slash => "`/`",
        Tok::Caret => "`^`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
        Tok::Num(..) => "number",
        Tok::Ident(_) => "identifier",
        Tok::End => "end of input",
    }
}

/// Parse and expand an operator expression into canonical form.
pub fn parse_operator(text: &str, bindings: &HashMap<String, Scalar>) -> Result<DiffOperator> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        bindings,
    };
    let op = p.expr()?;
    match p.peek() {
        Tok::End => Ok(op),
        t => {
            let d = describe(t);
            syntax(p.pos(), format!("unexpected {d}"))
        }
    }
}

/// Parse a coefficient-free expression (no `delta`) into a rational function.
pub fn parse_coefficient(text: &str, bindings: &HashMap<String, Scalar>) -> Result<RationalFunc> {
    let op = parse_operator(text, bindings)?;
    op.as_coeff()
        .ok_or_else(|| Error::InvalidInput(format!("`{text}` must not contain delta")))
}

/// Parse a constant such as `-1/3`, `0.25` or `(1+2i)/3`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let f = parse_coefficient(text, &HashMap::new())?;
    f.as_constant()
        .ok_or_else(|| Error::InvalidInput(format!("`{text}` is not a constant")))
}
