//! Recursive-descent parser for the polynomial grammar
//!
//! ```text
//! expr     := sign? term (("+" | "-") term)*
//! term     := factor ("*" factor)*
//! factor   := base ("^" nat)?
//! base     := rational | "x" | "y" | "z" | "t" | "(" expr ")"
//! rational := int ("/" nat)?
//! ```
//!
//! A leading sign is accepted at the start of an expression so printed
//! polynomials with a negative leading coefficient parse back.

use alloc::string::String;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Monomial, QPoly, Rational, Var, MAX_EXPONENT};
use crate::error::{Error, Result};

pub(super) fn parse(text: &str) -> Result<QPoly> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: String::from(msg) }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<QPoly> {
        let negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QPoly> {
        let start = self.pos;
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = acc.mul(&f, MAX_EXPONENT).map_err(|_| Error::ExponentOverflow { pos: start })?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<QPoly> {
        let base = self.base()?;
        if self.eat(b'^') {
            self.skip_ws();
            let at = self.pos;
            let e = self.nat()?;
            let e = u32::try_from(e).ok().filter(|e| *e <= MAX_EXPONENT).ok_or(Error::ExponentOverflow { pos: at })?;
            return base.pow(e, MAX_EXPONENT).map_err(|_| Error::ExponentOverflow { pos: at });
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<QPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                let mut r = BigRational::from_integer(n);
                if self.eat(b'/') {
                    self.skip_ws();
                    let d = self.digits()?;
                    if d == BigInt::from(0) {
                        return Err(self.syntax("zero denominator"));
                    }
                    r /= BigRational::from_integer(d);
                }
                Ok(QPoly::constant(Rational::from_big(r)))
            }
            Some(c) if c.is_ascii_alphabetic() => match Var::from_name(c as char) {
                Some(v) => {
                    self.pos += 1;
                    Ok(QPoly::monomial(Monomial::var(v), Rational::one()))
                }
                None => Err(Error::UnknownVariable { pos: self.pos, name: c as char }),
            },
            Some(_) => Err(self.syntax("expected a number, variable or `(`")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected digits"));
        }
        let txt = core::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(BigInt::from_str(txt).expect("digits parse"))
    }

    fn nat(&mut self) -> Result<u64> {
        let start = self.pos;
        let n = self.digits()?;
        u64::try_from(n).map_err(|_| Error::ExponentOverflow { pos: start })
    }
}
