//! Plain-text Laurent polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' exponent)?
//! exponent := ['-'] integer | '(' ['-'] integer ')'
//! atom   := number ['i'] | 'i' | 'x' | 'y' | parameter | '(' expr ')'
//! ```
//!
//! Numbers are decimal (`2`, `0.5`, `1e-3`); a trailing `i` makes them
//! imaginary, so `(1+2i)` is a complex coefficient. Parameters are other
//! identifiers (for example `t`) bound to complex values by the caller.
//! Division and negative powers are allowed only for single-term operands.
//! Juxtaposition is not multiplication: write `2*x`, not `2x`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::laurent::LaurentPolynomial;

/// Parses an expression with no parameters.
pub fn parse_poly(text: &str) -> Result<LaurentPolynomial> {
    parse_poly_with(text, &BTreeMap::new())
}

/// Parses an expression, substituting the given parameter values.
pub fn parse_poly_with(text: &str, params: &BTreeMap<String, Complex64>) -> Result<LaurentPolynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        params,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    if poly.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    params: &'a BTreeMap<String, Complex64>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LaurentPolynomial> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPolynomial> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.unary()?;
                let inv = invert_monomial(&d).ok_or(Error::Syntax {
                    pos: at,
                    msg: "division by a non-monomial or zero".into(),
                })?;
                acc = acc.mul(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentPolynomial> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<LaurentPolynomial> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer exponent"));
        }
        let n: i64 = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("exponent out of range"))?;
        if paren && !self.eat(b')') {
            return Err(self.err("expected ')'"));
        }
        let n = if neg { -n } else { n };
        if n >= 0 {
            let mut out = LaurentPolynomial::constant(Complex64::new(1.0, 0.0));
            for _ in 0..n {
                out = out.mul(&base);
            }
            Ok(out)
        } else {
            let inv = invert_monomial(&base).ok_or(Error::Syntax {
                pos: at,
                msg: "negative power of a non-monomial".into(),
            })?;
            let mut out = LaurentPolynomial::constant(Complex64::new(1.0, 0.0));
            for _ in 0..(-n) {
                out = out.mul(&inv);
            }
            Ok(out)
        }
    }

    fn atom(&mut self) -> Result<LaurentPolynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let v = self.number()?;
                if self.src.get(self.pos) == Some(&b'i') && !self.ident_continues(self.pos + 1) {
                    self.pos += 1;
                    Ok(LaurentPolynomial::constant(Complex64::new(0.0, v)))
                } else {
                    Ok(LaurentPolynomial::constant(Complex64::new(v, 0.0)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.ident_continues(self.pos) {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match name {
                    "x" => Ok(LaurentPolynomial::monomial(LatticePoint::new(1, 0), Complex64::new(1.0, 0.0))),
                    "y" => Ok(LaurentPolynomial::monomial(LatticePoint::new(0, 1), Complex64::new(1.0, 0.0))),
                    "i" => Ok(LaurentPolynomial::constant(Complex64::new(0.0, 1.0))),
                    _ => match self.params.get(name) {
                        Some(&v) => Ok(LaurentPolynomial::constant(v)),
                        None => Err(Error::Syntax {
                            pos: start,
                            msg: format!("unbound identifier '{name}'"),
                        }),
                    },
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn ident_continues(&self, at: usize) -> bool {
        self.src
            .get(at)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let s = self.src;
        while self.pos < s.len() && (s[self.pos].is_ascii_digit() || s[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < s.len() && (s[self.pos] == b'e' || s[self.pos] == b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < s.len() && (s[self.pos] == b'+' || s[self.pos] == b'-') {
                self.pos += 1;
            }
            let digits = self.pos;
            while self.pos < s.len() && s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if digits == self.pos {
                self.pos = save;
            }
        }
        std::str::from_utf8(&s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Syntax {
                pos: start,
                msg: "malformed number".into(),
            })
    }
}

fn invert_monomial(p: &LaurentPolynomial) -> Option<LaurentPolynomial> {
    if p.len() != 1 {
        return None;
    }
    let (e, c) = p.terms().next()?;
    if c.norm() == 0.0 {
        return None;
    }
    Some(LaurentPolynomial::monomial(-e, c.inv()))
}
