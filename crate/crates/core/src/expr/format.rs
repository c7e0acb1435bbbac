use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Expr, Term};

/// Prints an expression in the parser's grammar, highest key first
/// (so `x0^2 - 1` rather than `-1 + x0^2`). Numbers use the shortest
/// representation that reads back to the same `f64`.
pub fn format_expr(e: &Expr) -> String {
    if e.is_zero() {
        return String::from("0");
    }
    let mut out = String::new();
    for (i, t) in e.terms().iter().rev().enumerate() {
        let (negative, body) = format_term(t);
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

fn format_term(t: &Term) -> (bool, String) {
    let mut factors: Vec<String> = Vec::new();
    for (axis, &e) in t.monomial.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => factors.push(format!("x{axis}")),
            _ => factors.push(format!("x{axis}^{e}")),
        }
    }
    if !t.wave.is_zero() {
        let comps: Vec<String> = t.wave.components().iter().map(|&k| signed(k)).collect();
        factors.push(format!("pw({})", comps.join(",")));
    }
    let (re, im) = (t.coeff.re, t.coeff.im);
    let (negative, coeff) = if im == 0.0 {
        let text = if re.abs() == 1.0 && !factors.is_empty() {
            None
        } else {
            Some(real(re.abs()))
        };
        (re < 0.0, text)
    } else if re == 0.0 {
        (im < 0.0, Some(format!("{}i", real(im.abs()))))
    } else {
        let (neg, re, im) = if re < 0.0 { (true, -re, -im) } else { (false, re, im) };
        let sign = if im < 0.0 { '-' } else { '+' };
        (neg, Some(format!("({}{}{}i)", real(re), sign, real(im.abs()))))
    };
    let mut parts: Vec<String> = Vec::with_capacity(factors.len() + 1);
    if let Some(c) = coeff {
        parts.push(c);
    }
    parts.extend(factors);
    (negative, parts.join("*"))
}

fn signed(v: f64) -> String {
    if v < 0.0 {
        format!("-{}", real(-v))
    } else {
        real(v)
    }
}

/// Non-negative real in shortest round-trip form.
fn real(v: f64) -> String {
    if v == 0.0 || (1e-5..1e16).contains(&v) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}
