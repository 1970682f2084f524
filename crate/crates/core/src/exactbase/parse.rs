//! Text grammar for rationals and polynomials.
//!
//! `-3/2*x1^2*t[2,0,0] + x2 - 1`: terms joined by `+`/`-`, factors by `*`.
//! Structural variables are `x<i>`, coefficient variables `t[e1,...,ed]`,
//! any other identifier is an auxiliary symbol.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{Monomial, Poly, VarId};
use super::Rational;
use crate::error::{Error, Result};

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim().replace('\u{2212}', "-");
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(&s).map_err(|_| bad())?)),
    }
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.chars().map(|c| if c == '\u{2212}' { '-' } else { c }).collect(),
            pos: 0,
            src,
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
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

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
        {
            if self.pos == start && self.chars[self.pos].is_ascii_digit() {
                return None;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn number(&mut self) -> Result<Rational> {
        let n = self.digits().ok_or_else(|| self.err("expected integer"))?;
        let n = BigInt::from_str(&n).map_err(|_| self.err("bad integer"))?;
        if self.eat('/') {
            let d = self.digits().ok_or_else(|| self.err("expected denominator"))?;
            let d = BigInt::from_str(&d).map_err(|_| self.err("bad denominator"))?;
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(Rational::new(n, d))
        } else {
            Ok(Rational::from_integer(n))
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.eat('^') {
            let e = self.digits().ok_or_else(|| self.err("expected exponent"))?;
            e.parse().map_err(|_| self.err("bad exponent"))
        } else {
            Ok(1)
        }
    }

    fn variable(&mut self) -> Result<VarId> {
        let name = self.ident().ok_or_else(|| self.err("expected variable"))?;
        if name == "t" && self.eat('[') {
            let mut exps = Vec::new();
            loop {
                let e = self.digits().ok_or_else(|| self.err("expected t-exponent"))?;
                exps.push(e.parse::<u8>().map_err(|_| self.err("bad t-exponent"))?);
                if self.eat(']') {
                    break;
                }
                if !self.eat(',') {
                    return Err(self.err("expected ',' or ']'"));
                }
            }
            return Ok(VarId::Coefficient(exps));
        }
        if let Some(rest) = name.strip_prefix('x') {
            if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                let i: u16 = rest.parse().map_err(|_| self.err("bad index"))?;
                if i == 0 {
                    return Err(self.err("structural indices start at 1"));
                }
                return Ok(VarId::Structural(i));
            }
        }
        Ok(VarId::Auxiliary(name))
    }

    fn term(&mut self) -> Result<(Rational, Monomial)> {
        let mut c = Rational::one();
        let mut pairs = Vec::new();
        loop {
            match self.peek() {
                Some(ch) if ch.is_ascii_digit() => {
                    let k = self.number()?;
                    c *= k;
                }
                Some(_) => {
                    let v = self.variable()?;
                    let e = self.exponent()?;
                    pairs.push((v, e));
                }
                None => return Err(self.err("unexpected end")),
            }
            if !self.eat('*') {
                break;
            }
        }
        Ok((c, Monomial::from_pairs(pairs)))
    }

    fn poly(&mut self) -> Result<Poly> {
        let mut p = Poly::zero();
        let mut neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        loop {
            let (c, m) = self.term()?;
            p.add_term(m, if neg { -c } else { c });
            match self.peek() {
                None => break,
                Some('+') => {
                    self.pos += 1;
                    neg = false;
                }
                Some('-') => {
                    self.pos += 1;
                    neg = true;
                }
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
        }
        Ok(p)
    }
}

impl FromStr for Poly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Poly> {
        let mut cur = Cursor::new(s);
        if cur.peek().is_none() {
            return Err(cur.err("empty polynomial"));
        }
        let p = cur.poly()?;
        if cur.peek().is_some() {
            return Err(cur.err("trailing input"));
        }
        Ok(p)
    }
}
