//! Parser for the polynomial text format.
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := power (('*'|'/') power)*
//! power    := atom ['^' exponent]
//! exponent := integer | '(' ['-'] integer ['/' integer] ')'
//! atom     := integer | identifier | 'I' | '(' expr ')'
//! ```
//!
//! `I` is the imaginary unit. Division and fractional powers need a
//! single-term operand.

use num::bigint::BigInt;
use num::{One, Signed};

use super::monomial::Monomial;
use super::poly::MultiPoly;
use super::rational::{Frac, Rational};
use crate::error::{Error, Result};

pub fn parse_poly(src: &str) -> Result<MultiPoly> {
    let mut p = Parser { chars: src.chars().collect(), pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

/// Parse a rational literal such as `-3/4`.
pub fn parse_rational(src: &str) -> Result<Rational> {
    let p = parse_poly(src)?;
    p.as_rational().ok_or_else(|| Error::Parse(format!("not a rational number: {src}")))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> Error {
        let s: String = self.chars.iter().collect();
        Error::Parse(format!("{msg} at column {} in `{s}`", self.pos + 1))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut neg = false;
        if self.eat('-') {
            neg = true;
        } else {
            self.eat('+');
        }
        let first = self.term()?;
        let mut acc = if neg { -first } else { first };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                let inv = d.inv().map_err(|_| self.err("division by a non-monomial"))?;
                acc = &acc * &inv;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        if e.is_integer() && !e.is_negative() {
            return Ok(base.pow(e.to_integer() as u32));
        }
        base.unit_pow(e, 0).map_err(|err| self.err(&format!("bad power: {err}")))
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }

    fn small(&mut self) -> Result<i64> {
        let v = self.integer()?;
        i64::try_from(v).map_err(|_| self.err("exponent too large"))
    }

    fn exponent(&mut self) -> Result<Frac> {
        if self.eat('(') {
            let neg = self.eat('-');
            let n = self.small()?;
            let d = if self.eat('/') { self.small()? } else { 1 };
            if d == 0 {
                return Err(self.err("zero denominator"));
            }
            if !self.eat(')') {
                return Err(self.err("expected ')'"));
            }
            Ok(Frac::new(if neg { -n } else { n }, d))
        } else if self.eat('-') {
            Ok(Frac::from_integer(-self.small()?))
        } else {
            Ok(Frac::from_integer(self.small()?))
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(MultiPoly::constant(Rational::from_integer(self.integer()?))),
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len() && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if name == "I" {
                    Ok(MultiPoly::term(Rational::one(), Monomial::imaginary()))
                } else {
                    Ok(MultiPoly::var(&name))
                }
            }
            _ => Err(self.err("expected a number, symbol or '('")),
        }
    }
}
