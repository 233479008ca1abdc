//! Recursive-descent parser for formulas, linear terms and scalars.
//!
//! ```text
//! formula := quant | iff
//! quant   := ("EX" | "ALL") var "." formula
//! iff     := imp {"<->" imp}              left associative
//! imp     := or ["->" imp]                right associative
//! or      := and {"\/" and}
//! and     := lit {"/\" lit}
//! lit     := "~" lit | quant | "(" formula ")" | "true" | "false"
//!          | "P1" "(" term "," term ")" | term rel term
//! rel     := "<" | "<=" | "=" | "!=" | ">" | ">="
//! term    := ["+"|"-"] prod {("+"|"-") prod}
//! prod    := unary {("*"|"/") unary}
//! unary   := "-" unary | power
//! power   := atom ["^" ["-"] integer]
//! atom    := integer | "pi" | var | "(" term ")"
//! ```

use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use super::{Formula, LinearTerm, Rel};
use crate::scalar::{PiScalar, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("malformed scalar at offset {pos}: {msg}")]
    MalformedScalar { pos: usize, msg: String },
    #[error("nonlinear term at offset {pos}: {msg}")]
    Nonlinear { pos: usize, msg: String },
}

impl ParseError {
    pub fn pos(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::MalformedScalar { pos, .. } | ParseError::Nonlinear { pos, .. } => {
                *pos
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Tilde,
    And,
    Or,
    Imp,
    Iff,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let rest = &text[i..];
        let (tok, len) = if c.is_ascii_whitespace() {
            i += 1;
            continue;
        } else if c.is_ascii_digit() {
            let len = rest.bytes().take_while(u8::is_ascii_digit).count();
            (Tok::Int(rest[..len].parse().unwrap()), len)
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let len = rest
                .bytes()
                .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_' || *b == b'\'')
                .count();
            (Tok::Ident(rest[..len].to_string()), len)
        } else if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Imp, 2)
        } else if rest.starts_with("/\\") {
            (Tok::And, 2)
        } else if rest.starts_with("\\/") {
            (Tok::Or, 2)
        } else if rest.starts_with("<=") {
            (Tok::Le, 2)
        } else if rest.starts_with(">=") {
            (Tok::Ge, 2)
        } else if rest.starts_with("!=") {
            (Tok::Ne, 2)
        } else {
            let t = match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b'.' => Tok::Dot,
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'/' => Tok::Slash,
                b'^' => Tok::Caret,
                b'~' => Tok::Tilde,
                b'<' => Tok::Lt,
                b'>' => Tok::Gt,
                b'=' => Tok::Eq,
                _ => {
                    let ch = rest.chars().next().unwrap();
                    return Err(ParseError::Syntax { pos: start, msg: format!("unexpected character {ch:?}") });
                }
            };
            (t, 1)
        };
        out.push((tok, start));
        i += len;
    }
    Ok(out)
}

const KEYWORDS: [&str; 6] = ["EX", "ALL", "pi", "true", "false", "P1"];

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(text: &str) -> PResult<Self> {
        Ok(Parser { toks: lex(text)?, pos: 0, end: text.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn error(&self, msg: String) -> ParseError {
        ParseError::Syntax { pos: self.offset(), msg }
    }

    fn finish(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.error(format!("unexpected trailing input {t:?}"))),
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == name)
    }

    fn formula(&mut self) -> PResult<Formula> {
        if self.is_ident("EX") || self.is_ident("ALL") {
            return self.quant();
        }
        self.iff()
    }

    fn quant(&mut self) -> PResult<Formula> {
        let universal = self.is_ident("ALL");
        self.bump();
        let var = self.var()?;
        self.expect(&Tok::Dot, "'.' after quantified variable")?;
        let body = self.formula()?;
        Ok(if universal { Formula::forall(var, body) } else { Formula::exists(var, body) })
    }

    fn var(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected a variable".into())),
        }
    }

    fn iff(&mut self) -> PResult<Formula> {
        let mut lhs = self.imp()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> PResult<Formula> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.and()?];
        while self.eat(&Tok::Or) {
            parts.push(self.and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn and(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.lit()?];
        while self.eat(&Tok::And) {
            parts.push(self.lit()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn lit(&mut self) -> PResult<Formula> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.lit()?));
        }
        if self.is_ident("EX") || self.is_ident("ALL") {
            return self.quant();
        }
        if self.is_ident("true") {
            self.bump();
            return Ok(Formula::True);
        }
        if self.is_ident("false") {
            self.bump();
            return Ok(Formula::False);
        }
        if self.is_ident("P1") && self.peek_at(1) == Some(&Tok::LParen) {
            self.pos += 2;
            let s = self.term()?;
            self.expect(&Tok::Comma, "','")?;
            let t = self.term()?;
            self.expect(&Tok::RParen, "')'")?;
            return Ok(Formula::PiLt(s, t));
        }
        if self.peek() == Some(&Tok::LParen) {
            // either a parenthesized formula or the start of a parenthesized term
            let save = self.pos;
            self.pos += 1;
            let attempt = self.formula().and_then(|f| {
                self.expect(&Tok::RParen, "')'")?;
                Ok(f)
            });
            match attempt {
                Ok(f) if !self.continues_term() => return Ok(f),
                Ok(_) => self.pos = save,
                Err(e) => {
                    self.pos = save;
                    return self.atom().map_err(|atom_err| if atom_err.pos() >= e.pos() { atom_err } else { e });
                }
            }
        }
        self.atom()
    }

    fn continues_term(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                Tok::Plus | Tok::Minus | Tok::Star | Tok::Slash | Tok::Caret | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge
                    | Tok::Eq | Tok::Ne
            )
        )
    }

    fn atom(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        let rel = match self.bump() {
            Some(Tok::Lt) => Tok::Lt,
            Some(Tok::Le) => Tok::Le,
            Some(Tok::Gt) => Tok::Gt,
            Some(Tok::Ge) => Tok::Ge,
            Some(Tok::Eq) => Tok::Eq,
            Some(Tok::Ne) => Tok::Ne,
            _ => {
                self.pos -= 1;
                return Err(self.error("expected a relation (<, <=, =, !=, >, >=)".into()));
            }
        };
        let rhs = self.term()?;
        Ok(match rel {
            Tok::Lt => Formula::atom(&lhs - &rhs, Rel::Lt),
            Tok::Le => Formula::atom(&lhs - &rhs, Rel::Le),
            Tok::Gt => Formula::atom(&rhs - &lhs, Rel::Lt),
            Tok::Ge => Formula::atom(&rhs - &lhs, Rel::Le),
            Tok::Eq => Formula::atom(&lhs - &rhs, Rel::Eq),
            _ => Formula::atom(&lhs - &rhs, Rel::Ne),
        })
    }

    fn term(&mut self) -> PResult<LinearTerm> {
        let mut acc = if self.eat(&Tok::Minus) {
            -&self.prod()?
        } else {
            self.eat(&Tok::Plus);
            self.prod()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.prod()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.prod()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn prod(&mut self) -> PResult<LinearTerm> {
        let mut acc = self.unary()?;
        loop {
            let at = self.offset();
            if self.eat(&Tok::Star) {
                let rhs = self.unary()?;
                acc = if acc.is_ground() {
                    rhs.scale(acc.constant_term())
                } else if rhs.is_ground() {
                    acc.scale(rhs.constant_term())
                } else {
                    return Err(ParseError::Nonlinear { pos: at, msg: "product of two variable terms".into() });
                };
            } else if self.eat(&Tok::Slash) {
                let rhs = self.unary()?;
                if !rhs.is_ground() {
                    return Err(ParseError::Nonlinear { pos: at, msg: "division by a variable term".into() });
                }
                let d = rhs.constant_term();
                if d.is_zero() {
                    return Err(ParseError::MalformedScalar { pos: at, msg: "division by zero".into() });
                }
                acc = acc.scale(&d.recip().expect("nonzero"));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> PResult<LinearTerm> {
        if self.eat(&Tok::Minus) {
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> PResult<LinearTerm> {
        let base = self.primary()?;
        let at = self.offset();
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let negative = self.eat(&Tok::Minus);
        let exp = match self.bump() {
            Some(Tok::Int(n)) => n,
            _ => return Err(ParseError::MalformedScalar { pos: at, msg: "exponent must be an integer literal".into() }),
        };
        if !base.is_ground() {
            return Err(ParseError::Nonlinear { pos: at, msg: "power of a variable term".into() });
        }
        let exp: u32 = exp
            .try_into()
            .map_err(|_| ParseError::MalformedScalar { pos: at, msg: "exponent too large".into() })?;
        let b = base.constant_term();
        let mut value = PiScalar::one();
        for _ in 0..exp {
            value = &value * b;
        }
        if negative {
            value = value
                .recip()
                .map_err(|_| ParseError::MalformedScalar { pos: at, msg: "negative power of zero".into() })?;
        }
        Ok(LinearTerm::constant(value))
    }

    fn primary(&mut self) -> PResult<LinearTerm> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(LinearTerm::constant(PiScalar::from_rational(Rational::from_integer(n)))),
            Some(Tok::Ident(s)) if s == "pi" => Ok(LinearTerm::constant(PiScalar::pi())),
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => Ok(LinearTerm::var(s)),
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(t)
            }
            Some(t) => {
                self.pos -= 1;
                Err(ParseError::Syntax { pos: at, msg: format!("expected a term, found {t:?}") })
            }
            None => Err(ParseError::Syntax { pos: at, msg: "unexpected end of input".into() }),
        }
    }
}

/// Parses a formula; atoms come out in canonical `term rel 0` form.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses a linear term.
pub fn parse_term(text: &str) -> Result<LinearTerm, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a variable-free scalar expression such as `(3*pi^2 - 1/2)/(pi + 2)`.
pub fn parse_scalar(text: &str) -> Result<PiScalar, ParseError> {
    let t = parse_term(text)?;
    if let Some(v) = t.vars().next() {
        return Err(ParseError::MalformedScalar { pos: 0, msg: format!("scalar mentions variable {v}") });
    }
    Ok(t.constant_term().clone())
}

impl FromStr for PiScalar {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s)
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
