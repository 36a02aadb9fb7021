//! Text grammar for expressions and polynomials.
//!
//! ```text
//! expr    := ["-"] term (("+" | "-") term)*
//! term    := factor (["*"] factor)*
//! factor  := atom postfix*
//! postfix := "^-1" | "^*" | "^" uint
//! atom    := letter | number | literal | "(" expr ")"
//! literal := "(" ["-"] number [("+" | "-") number] ")"   complex constant
//! letter  := ("X" | "Y") uint
//! number  := uint ["/" uint] ["i"]
//! ```

use malachite_q::Rational;
use thiserror::Error;

use super::RatExpr;
use crate::ncpoly::{Family, Letter, NcPoly};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown letter `{letter}` at byte {offset} (alphabet size {g})")]
    UnknownLetter { offset: usize, letter: String, g: usize },
    #[error("expected a polynomial but the expression contains an inverse")]
    NotPolynomial,
}

pub fn parse_expression(text: &str, g: usize) -> Result<RatExpr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, g };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

pub fn parse_polynomial(text: &str, g: usize) -> Result<NcPoly, ParseError> {
    parse_expression(text, g)?.to_poly(g).map_err(|_| ParseError::NotPolynomial)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    g: usize,
}

/// Parsed number token: rational value and whether it carried `i`.
struct Number {
    value: Rational,
    imaginary: bool,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax { offset: self.pos, message: message.to_string() }
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", b as char)))
        }
    }

    fn expr(&mut self) -> Result<RatExpr, ParseError> {
        let mut items = Vec::new();
        let first = if self.eat(b'-') { RatExpr::neg(self.term()?) } else { self.term()? };
        items.push(first);
        loop {
            if self.eat(b'+') {
                items.push(self.term()?);
            } else if self.eat(b'-') {
                items.push(RatExpr::neg(self.term()?));
            } else {
                break;
            }
        }
        Ok(RatExpr::sum(items))
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(b'X' | b'Y' | b'(' | b'0'..=b'9'))
    }

    fn term(&mut self) -> Result<RatExpr, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.eat(b'*') || self.starts_factor() {
                factors.push(self.factor()?);
            } else {
                break;
            }
        }
        Ok(RatExpr::product(factors))
    }

    fn factor(&mut self) -> Result<RatExpr, ParseError> {
        let mut e = self.atom()?;
        while self.eat(b'^') {
            if self.eat(b'*') {
                e = e.star();
            } else if self.eat(b'-') {
                let at = self.pos;
                match self.uint()? {
                    1 => e = RatExpr::inv(e),
                    _ => {
                        return Err(ParseError::Syntax {
                            offset: at,
                            message: "only `^-1` negative powers are allowed".into(),
                        })
                    }
                }
            } else {
                let k = self.uint()?;
                e = match k {
                    0 => RatExpr::int(1),
                    1 => e,
                    _ => RatExpr::Mul(vec![e; k as usize]),
                };
            }
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<RatExpr, ParseError> {
        match self.peek() {
            Some(b'X' | b'Y') => self.letter(),
            Some(b'0'..=b'9') => {
                let n = self.number()?;
                Ok(RatExpr::Const(if n.imaginary {
                    Scalar::new(Rational::from(0u32), n.value)
                } else {
                    Scalar::from_rational(n.value)
                }))
            }
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                if let Some(c) = self.literal() {
                    return Ok(RatExpr::Const(c));
                }
                self.pos = open + 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(_) => Err(self.error("expected a letter, number or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    /// Complex constant literal after `(`; restores nothing on failure.
    fn literal(&mut self) -> Option<Scalar> {
        let negative = self.eat(b'-');
        if !matches!(self.peek(), Some(b'0'..=b'9')) {
            return None;
        }
        let first = self.number().ok()?;
        let sign = |neg: bool, r: Rational| if neg { -r } else { r };
        let first_value = sign(negative, first.value);
        let value = if first.imaginary {
            Scalar::new(Rational::from(0u32), first_value)
        } else if self.peek() == Some(b')') {
            Scalar::from_rational(first_value)
        } else {
            let neg_im = if self.eat(b'-') {
                true
            } else if self.eat(b'+') {
                false
            } else {
                return None;
            };
            if !matches!(self.peek(), Some(b'0'..=b'9')) {
                return None;
            }
            let second = self.number().ok()?;
            if !second.imaginary {
                return None;
            }
            Scalar::new(first_value, sign(neg_im, second.value))
        };
        self.eat(b')').then_some(value)
    }

    fn uint(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse().map_err(|_| ParseError::Syntax { offset: start, message: "integer too large".into() })
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits")
    }

    fn number(&mut self) -> Result<Number, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut text = self.digits().to_string();
        if text.is_empty() {
            return Err(self.error("expected a number"));
        }
        // A fraction bar must be followed directly by digits.
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let den = self.digits().to_string();
            if den.is_empty() {
                return Err(self.error("expected a denominator"));
            }
            if den.bytes().all(|b| b == b'0') {
                return Err(ParseError::Syntax { offset: start, message: "zero denominator".into() });
            }
            text = format!("{text}/{den}");
        }
        let value =
            Scalar::parse_rational(&text).map_err(|e| ParseError::Syntax { offset: start, message: e.to_string() })?;
        let imaginary = self.src.get(self.pos) == Some(&b'i');
        if imaginary {
            self.pos += 1;
        }
        Ok(Number { value, imaginary })
    }

    fn letter(&mut self) -> Result<RatExpr, ParseError> {
        let start = self.pos;
        let family = if self.src[self.pos] == b'X' { Family::X } else { Family::Y };
        self.pos += 1;
        let digits = self.digits().to_string();
        if digits.is_empty() {
            return Err(self.error("expected a letter index"));
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").to_string();
        let index: u32 =
            digits.parse().map_err(|_| ParseError::UnknownLetter { offset: start, letter: name.clone(), g: self.g })?;
        if index == 0 || index as usize > self.g {
            return Err(ParseError::UnknownLetter { offset: start, letter: name, g: self.g });
        }
        Ok(RatExpr::Var(Letter { family, index, starred: false }))
    }
}

/// Canonical text; `parse_expression(format_expression(e))` rebuilds `e` exactly.
pub fn format_expression(e: &RatExpr) -> String {
    let mut out = String::new();
    write_expr(e, &mut out);
    out
}

fn write_expr(e: &RatExpr, out: &mut String) {
    match e {
        RatExpr::Add(items) => {
            for (k, item) in items.iter().enumerate() {
                match (k, item) {
                    (0, RatExpr::Neg(c)) => {
                        out.push('-');
                        write_term(c, out);
                    }
                    (0, _) => write_term(item, out),
                    (_, RatExpr::Neg(c)) => {
                        out.push_str(" - ");
                        write_term(c, out);
                    }
                    _ => {
                        out.push_str(" + ");
                        write_term(item, out);
                    }
                }
            }
        }
        RatExpr::Neg(c) => write_neg(c, out),
        _ => write_term(e, out),
    }
}

fn write_neg(child: &RatExpr, out: &mut String) {
    out.push('-');
    match child {
        // `(-1)` would read back as a literal constant, so keep the sign outside.
        RatExpr::Const(c) => {
            let s = c.to_string();
            if s.starts_with('(') {
                out.push_str(&s);
            } else {
                out.push('(');
                out.push_str(&s);
                out.push(')');
            }
        }
        _ => write_term(child, out),
    }
}

/// Something that reads back as a single `term`.
fn write_term(e: &RatExpr, out: &mut String) {
    match e {
        RatExpr::Mul(items) => {
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                write_factor(item, out);
            }
        }
        RatExpr::Add(_) | RatExpr::Neg(_) => parenthesized(e, out),
        _ => write_factor(e, out),
    }
}

/// Something that reads back as a single `factor`.
fn write_factor(e: &RatExpr, out: &mut String) {
    match e {
        RatExpr::Const(c) => out.push_str(&c.to_string()),
        RatExpr::Var(l) => out.push_str(&l.to_string()),
        RatExpr::Inv(c) => {
            match c.as_ref() {
                RatExpr::Var(l) if !l.starred => out.push_str(&l.to_string()),
                RatExpr::Const(s) => out.push_str(&s.to_string()),
                other => parenthesized(other, out),
            }
            out.push_str("^-1");
        }
        RatExpr::Add(_) | RatExpr::Neg(_) | RatExpr::Mul(_) => parenthesized(e, out),
    }
}

fn parenthesized(e: &RatExpr, out: &mut String) {
    out.push('(');
    write_expr(e, out);
    out.push(')');
}
