//! Recursive-descent parser for ring element expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nonneg-int)?
//! base   := int | int '/' int | variable | '(' expr ')' | '-' factor
//! ```
//!
//! Whitespace is insignificant; implicit multiplication is rejected. The
//! `p/q` literal is only accepted when the ring's base is the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::{BaseRing, Ring, RingElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    UnknownVariable(String),
    NegativeExponent,
    ExponentTooLarge,
    RationalInIntegerRing,
    ZeroDenominator,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            ParseErrorKind::NegativeExponent => write!(f, "negative exponent"),
            ParseErrorKind::ExponentTooLarge => write!(f, "exponent too large"),
            ParseErrorKind::RationalInIntegerRing => {
                write!(f, "rational literal in a ring over the integers")
            }
            ParseErrorKind::ZeroDenominator => write!(f, "zero denominator"),
        }
    }
}

/// A syntax or semantic error; `position` is a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

struct Parser<'a> {
    ring: &'a Ring,
    src: &'a [u8],
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

pub(super) fn parse(ring: &Ring, text: &str) -> PResult<RingElement> {
    let mut p = Parser {
        ring,
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(e),
        Some(c) => Err(p.err(ParseErrorKind::UnexpectedChar(c as char))),
    }
}

impl Parser<'_> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.pos,
            kind,
        }
    }

    fn skip_ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    /// Next non-whitespace byte, without consuming it.
    fn peek_token(&mut self) -> Option<u8> {
        self.skip_ws();
        self.peek()
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            None => self.err(ParseErrorKind::UnexpectedEnd),
            Some(c) => {
                // report the full UTF-8 character, not a byte
                let ch = std::str::from_utf8(&self.src[self.pos..])
                    .ok()
                    .and_then(|s| s.chars().next())
                    .unwrap_or(c as char);
                self.err(ParseErrorKind::UnexpectedChar(ch))
            }
        }
    }

    fn expr(&mut self) -> PResult<RingElement> {
        let mut acc = self.term()?;
        loop {
            match self.peek_token() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<RingElement> {
        let mut acc = self.factor()?;
        while self.peek_token() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> PResult<RingElement> {
        let b = self.base()?;
        if self.peek_token() != Some(b'^') {
            return Ok(b);
        }
        self.pos += 1;
        let k = self.exponent()?;
        Ok(b.pow(k))
    }

    fn exponent(&mut self) -> PResult<u32> {
        match self.peek_token() {
            Some(b'-') => return Err(self.err(ParseErrorKind::NegativeExponent)),
            Some(b'(') => {
                // `x^(-1)` is diagnosed as a negative exponent; any other
                // parenthesized exponent is a plain syntax error.
                let open = self.pos;
                self.pos += 1;
                if self.peek_token() == Some(b'-') {
                    return Err(self.err(ParseErrorKind::NegativeExponent));
                }
                self.pos = open;
                return Err(self.unexpected());
            }
            Some(c) if c.is_ascii_digit() => {}
            _ => return Err(self.unexpected()),
        }
        let start = self.pos;
        let digits = self.digits();
        digits.parse::<u32>().map_err(|_| ParseError {
            position: start,
            kind: ParseErrorKind::ExponentTooLarge,
        })
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits")
    }

    fn base(&mut self) -> PResult<RingElement> {
        match self.peek_token() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek_token() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.variable(),
            _ => Err(self.unexpected()),
        }
    }

    fn number(&mut self) -> PResult<RingElement> {
        let start = self.pos;
        let numer: BigInt = self.digits().parse().expect("nonempty digit run");
        if self.peek_token() != Some(b'/') {
            return Ok(self.ring.from_bigint(numer));
        }
        if self.ring.base() == BaseRing::Integers {
            return Err(ParseError {
                position: start,
                kind: ParseErrorKind::RationalInIntegerRing,
            });
        }
        self.pos += 1;
        if !self.peek_token().is_some_and(|c| c.is_ascii_digit()) {
            return Err(self.unexpected());
        }
        let den_pos = self.pos;
        let denom: BigInt = self.digits().parse().expect("nonempty digit run");
        if denom.is_zero() {
            return Err(ParseError {
                position: den_pos,
                kind: ParseErrorKind::ZeroDenominator,
            });
        }
        Ok(self
            .ring
            .from_rational(BigRational::new(numer, denom))
            .expect("rational base accepts every fraction"))
    }

    fn variable(&mut self) -> PResult<RingElement> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        self.ring.variable(name).ok_or_else(|| ParseError {
            position: start,
            kind: ParseErrorKind::UnknownVariable(name.to_string()),
        })
    }
}
