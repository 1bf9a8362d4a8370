//! A small recursive-descent parser for polynomial expressions in at most two
//! variables with exact rational constants, e.g. `(x^2 - 1)*t^2 - 4*x^2*t + 3/4`.
//! A `/` is accepted only when the divisor is a nonzero constant.

use super::{BiPoly, Rational};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    v0: &'a str,
    v1: &'a str,
}

pub fn parse_bipoly(src: &str, v0: &str, v1: &str) -> Result<BiPoly> {
    let mut p = Parser { s: src.as_bytes(), pos: 0, v0, v1 };
    let r = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

/// Parse a univariate polynomial in `var`.
pub fn parse_unipoly(src: &str, var: &str) -> Result<super::UniPoly<Rational>> {
    let b = parse_bipoly(src, var, "_unused")?;
    if b.degree_in(1).unwrap_or(0) > 0 {
        return Err(Error::Parse(format!("'{src}' is not univariate in {var}")));
    }
    Ok(b.specialize(1, &Rational::zero()))
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in '{}'", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.negate()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = constant_of(&d).ok_or_else(|| self.err("division by a non-constant"))?;
                    if c.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.scale(&c.recip());
                }
                Some(b'(') | Some(b'a'..=b'z') | Some(b'A'..=b'Z') | Some(b'0'..=b'9') => {
                    // implicit multiplication, e.g. 2x or (x+1)(x-1)
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<BiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.s[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("bad exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BiPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.power()?.negate())
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap();
                Ok(BiPoly::constant(Rational::from_integer(n), self.v0, self.v1))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                if name == self.v0 {
                    Ok(BiPoly::var(0, self.v0, self.v1))
                } else if name == self.v1 {
                    Ok(BiPoly::var(1, self.v0, self.v1))
                } else {
                    Err(self.err(&format!("unknown variable '{name}'")))
                }
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

fn constant_of(p: &BiPoly) -> Option<Rational> {
    let mut c = Rational::zero();
    for (&(i, j), v) in p.terms() {
        if i != 0 || j != 0 {
            return None;
        }
        c = v.clone();
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn parses_maps() {
        let f = parse_bipoly("(x^2 - 1)*t^2 - 4*x^2*t - x^3 + 2*x^2 - x", "x", "t").unwrap();
        assert_eq!(f.eval(&rat(2, 1), &rat(3, 1)), rat(3 * 9 - 16 * 3 - 8 + 8 - 2, 1));
        let g = parse_bipoly("x^3 - 8x^2 - x + 8/9", "x", "y").unwrap();
        assert_eq!(g.eval(&rat(1, 1), &rat(0, 1)), rat(-8, 1) + rat(8, 9));
        assert!(parse_bipoly("x/(x+1)", "x", "y").is_err());
        assert!(parse_bipoly("z + 1", "x", "y").is_err());
    }
}
