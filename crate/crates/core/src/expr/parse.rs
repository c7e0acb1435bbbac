//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := ["+"|"-"] term (("+"|"-") term)*
//! term   := unary ("*" unary)*
//! unary  := "-" unary | factor
//! factor := number | coord | pw | "(" expr ")"
//! coord  := "x" digits ["^" digits]
//! pw     := "pw(" signed ("," signed)* ")"
//! number := decimal [exponent] ["i"]
//! ```
//!
//! Complex literals are written as parenthesized sums, e.g. `(1+2i)`.
//! Positions in errors are 0-based byte offsets.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::{Expr, MultiIndex, Term, Wave};
use crate::error::{Error, Result};

pub fn parse_expr(text: &str, dim: usize) -> Result<Expr> {
    if dim == 0 {
        return Err(Error::InvalidConfig("dimension must be at least 1"));
    }
    let mut p = Parser { src: text.as_bytes(), pos: 0, dim };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected character"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &'static str) -> Error {
        Error::Syntax { pos: self.pos, msg }
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

    fn expect(&mut self, c: u8, msg: &'static str) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(msg))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
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
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        while self.eat(b'*') {
            let f = self.unary()?;
            acc = acc.multiply(&f)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let d = self.dim;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')', "expected ')'")?;
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                let axis = self.digits().ok_or_else(|| self.err("expected coordinate index"))?;
                let axis = usize::try_from(axis).map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "coordinate index too large",
                })?;
                if axis >= d {
                    return Err(Error::AxisOutOfRange { axis, dim: d });
                }
                let mut exp = 1u32;
                if self.eat(b'^') {
                    self.skip_ws();
                    let at = self.pos;
                    let n = self.digits().ok_or(Error::BadExponent { pos: at })?;
                    if matches!(self.src.get(self.pos), Some(b'.') | Some(b'e') | Some(b'E')) {
                        return Err(Error::BadExponent { pos: at });
                    }
                    exp = u32::try_from(n).map_err(|_| Error::BadExponent { pos: at })?;
                }
                let mut m = MultiIndex::zero(d);
                m.0[axis] = exp;
                Ok(Expr::from_terms(d, alloc::vec![Term::new(Complex64::new(1.0, 0.0), m, Wave::zero(d))]))
            }
            Some(b'p') => {
                if !self.src[self.pos..].starts_with(b"pw(") {
                    return Err(self.err("unknown identifier"));
                }
                let start = self.pos;
                self.pos += 3;
                let mut comps = Vec::new();
                loop {
                    let neg = if self.eat(b'-') {
                        true
                    } else {
                        self.eat(b'+');
                        false
                    };
                    let (v, imag) = self.number()?;
                    if imag {
                        return Err(self.err("plane-wave components must be real"));
                    }
                    comps.push(if neg { -v } else { v });
                    if self.eat(b',') {
                        continue;
                    }
                    self.expect(b')', "expected ',' or ')'")?;
                    break;
                }
                if comps.len() != d {
                    return Err(Error::Syntax {
                        pos: start,
                        msg: "plane wave length differs from dimension",
                    });
                }
                Ok(Expr::plane_wave(&comps))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let (v, imag) = self.number()?;
                let c = if imag { Complex64::new(0.0, v) } else { Complex64::new(v, 0.0) };
                Ok(Expr::constant(d, c))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Option<u64> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(&c) = self.src.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            v = v.checked_mul(10)?.checked_add((c - b'0') as u64)?;
            self.pos += 1;
        }
        (self.pos > start).then_some(v)
    }

    /// Unsigned decimal with optional exponent and `i` suffix.
    fn number(&mut self) -> Result<(f64, bool)> {
        self.skip_ws();
        let start = self.pos;
        let mut seen_digit = false;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                seen_digit = true;
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            while let Some(&c) = self.src.get(self.pos) {
                if c.is_ascii_digit() {
                    seen_digit = true;
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        if !seen_digit {
            return Err(Error::Syntax { pos: start, msg: "expected number" });
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if !matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
                return Err(Error::Syntax { pos: save, msg: "malformed exponent" });
            }
            while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        let v: f64 = text
            .parse()
            .map_err(|_| Error::Syntax { pos: start, msg: "malformed number" })?;
        let imag = self.src.get(self.pos) == Some(&b'i');
        if imag {
            self.pos += 1;
        }
        Ok((v, imag))
    }
}
